#include "qrel/cognitive_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrel/error.hpp"

namespace qrel {

namespace {

// Params computed from probabilities can land a rounding error outside their
// range; anything further out is a caller bug.
constexpr double kRangeSlack = 1e-12;

double checked_amplitude(double x, const char* name) {
  if (!std::isfinite(x) || x < -kRangeSlack || x > 1.0 + kRangeSlack) {
    throw Error(ErrorCode::Domain, std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
  return std::clamp(x, 0.0, 1.0);
}

double complement(double a) { return std::sqrt(std::max(0.0, 1.0 - a * a)); }

}  // namespace

std::string_view to_string(Dimension d) noexcept {
  switch (d) {
    case Dimension::Topicality: return "Topicality";
    case Dimension::Understandability: return "Understandability";
    case Dimension::Reliability: return "Reliability";
  }
  return "?";
}

char dimension_letter(Dimension d) noexcept {
  switch (d) {
    case Dimension::Topicality: return 'T';
    case Dimension::Understandability: return 'U';
    case Dimension::Reliability: return 'R';
  }
  return '?';
}

RelevanceParams::RelevanceParams(double t, double u, double r, double theta_r)
    : t_(checked_amplitude(t, "t")), u_(checked_amplitude(u, "u")), r_(checked_amplitude(r, "r")) {
  if (!std::isfinite(theta_r) || theta_r < -kRangeSlack || theta_r > std::numbers::pi + kRangeSlack) {
    throw Error(ErrorCode::Domain, "theta_r must lie in [0, pi], got " + std::to_string(theta_r));
  }
  theta_r_ = std::clamp(theta_r, 0.0, std::numbers::pi);
}

QueryModel::QueryModel(std::string query_id, RelevanceParams params, std::string provenance)
    : query_id_(std::move(query_id)), params_(params), provenance_(std::move(provenance)) {
  if (query_id_.empty()) throw Error(ErrorCode::Domain, "query_id must not be empty");
}

Ket2 initial_state(const RelevanceParams& p) { return Ket2::normalized(p.t(), complement(p.t())); }

Basis2 basis_kets(const RelevanceParams& p, Dimension d) {
  switch (d) {
    case Dimension::Topicality:
      return Basis2::standard();
    case Dimension::Understandability: {
      const double u = p.u();
      const double su = complement(u);
      return Basis2(Ket2::normalized(u, su), Ket2::normalized(su, -u));
    }
    case Dimension::Reliability: {
      const double r = p.r();
      const double sr = complement(r);
      const Complex phase = std::polar(1.0, p.theta_r());
      return Basis2(Ket2::normalized(r, sr * phase), Ket2::normalized(sr * std::conj(phase), -r));
    }
  }
  throw Error(ErrorCode::Domain, "unknown dimension");
}

Observable2 observable(const RelevanceParams& p, Dimension d) { return observable_from_basis(basis_kets(p, d)); }

double predict_sequence_prob(const RelevanceParams& p, std::span<const Judgment> seq) {
  if (seq.empty()) throw Error(ErrorCode::InvalidSequence, "judgment sequence is empty");
  std::vector<Ket2> chain;
  chain.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0 && seq[i].dimension == seq[i - 1].dimension) {
      throw Error(ErrorCode::InvalidSequence,
                  std::string("dimension ") + std::string(to_string(seq[i].dimension)) + " asked twice in a row");
    }
    chain.push_back(basis_kets(p, seq[i].dimension).ket(seq[i].outcome));
  }
  return sequential_prob(initial_state(p), chain);
}

double predict_sequence_prob(const QueryModel& m, std::span<const Judgment> seq) {
  return predict_sequence_prob(m.params(), seq);
}

double reliability_given_understandability(double u, double r, double cos_theta) {
  const double su2 = 1.0 - u * u;
  const double sr2 = 1.0 - r * r;
  return (u * r) * (u * r) + su2 * sr2 + 2.0 * u * r * std::sqrt(std::max(0.0, su2 * sr2)) * cos_theta;
}

double interference_term(const RelevanceParams& p) {
  const Basis2 ub = basis_kets(p, Dimension::Understandability);
  const Basis2 rb = basis_kets(p, Dimension::Reliability);
  const double t2 = p.t() * p.t();
  const double u2 = p.u() * p.u();
  const double direct = t2 * p.r() * p.r();
  const double via_u = t2 * (u2 * prob_projection(ub.plus(), rb.plus()) +
                             (1.0 - u2) * prob_projection(ub.minus(), rb.plus()));
  return direct - via_u;
}

}  // namespace qrel
