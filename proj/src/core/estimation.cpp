#include "qrel/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qrel/error.hpp"

namespace qrel {

namespace {

double checked_probability(double p, const char* name) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw Error(ErrorCode::Domain, std::string(name) + " must be a probability in [0, 1], got " + std::to_string(p));
  }
  return p;
}

std::optional<double> value(const MaybeEstimate& e) {
  if (!e) return std::nullopt;
  return e->p;
}

// Product of a chain of probabilities. A zero factor makes the product zero
// even when a later conditional is undefined (its conditioning event never
// happens).
std::optional<double> product(std::initializer_list<std::optional<double>> xs) {
  double p = 1.0;
  bool missing = false;
  for (const auto& x : xs) {
    if (!x) {
      missing = true;
    } else if (*x == 0.0) {
      return 0.0;
    } else {
      p *= *x;
    }
  }
  if (missing) return std::nullopt;
  return p;
}

std::optional<double> complement(const MaybeEstimate& e) {
  if (!e) return std::nullopt;
  return 1.0 - e->p;
}

// Tallies of one question-order group for one query.
struct GroupTally {
  std::uint64_t n = 0;
  std::uint64_t first_yes = 0;
  std::uint64_t second_yes = 0;             // among first_yes
  std::uint64_t third_yes_after_yes = 0;    // among second_yes
  std::uint64_t third_yes_after_no = 0;     // among first_yes with second no
};

MaybeEstimate ratio(std::uint64_t k, std::uint64_t n, const std::string& what, std::vector<std::string>& notes) {
  if (n == 0) {
    notes.push_back(what + " unavailable: conditioning event has zero count");
    return std::nullopt;
  }
  return Estimate::from_counts(k, n);
}

}  // namespace

std::string_view to_string(SequenceOrder s) noexcept { return s == SequenceOrder::TUR ? "TUR" : "TRU"; }

std::optional<SequenceOrder> parse_sequence_order(std::string_view tag) noexcept {
  if (tag == "TUR") return SequenceOrder::TUR;
  if (tag == "TRU") return SequenceOrder::TRU;
  return std::nullopt;
}

Dimension dimension_at(SequenceOrder s, std::size_t i) noexcept {
  if (i == 0) return Dimension::Topicality;
  const bool u_second = s == SequenceOrder::TUR;
  return (i == 1) == u_second ? Dimension::Understandability : Dimension::Reliability;
}

void validate_record(const ResponseRecord& rec) {
  if (rec.respondent_id.empty()) throw Error(ErrorCode::Domain, "respondent_id is empty");
  if (rec.query_id.empty()) throw Error(ErrorCode::Domain, "query_id is empty");
  if (!rec.answers[0]) throw Error(ErrorCode::Domain, "answer1 (Topicality) is required");
  if (*rec.answers[0] && (!rec.answers[1] || !rec.answers[2])) {
    throw Error(ErrorCode::Domain, "answers 2 and 3 are required after a yes on Topicality");
  }
  if (!rec.answers[1] && rec.answers[2]) throw Error(ErrorCode::Domain, "answer3 given but answer2 skipped");
}

ResponseDataset::ResponseDataset(std::vector<ResponseRecord> records) {
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

void ResponseDataset::add(ResponseRecord rec) {
  validate_record(rec);
  // '\x1f' cannot appear in a CSV field we accept, so the key is unambiguous.
  std::string key = rec.respondent_id + '\x1f' + rec.query_id;
  if (!keys_.insert(key).second) {
    throw Error(ErrorCode::DuplicateRespondent,
                "respondent '" + rec.respondent_id + "' already answered query '" + rec.query_id + "'");
  }
  records_.push_back(std::move(rec));
}

std::vector<std::string> ResponseDataset::query_ids() const {
  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  for (const auto& r : records_) {
    if (seen.insert(r.query_id).second) ids.push_back(r.query_id);
  }
  return ids;
}

Estimate Estimate::from_counts(std::uint64_t k, std::uint64_t n) {
  if (n == 0 || k > n) throw Error(ErrorCode::Domain, "invalid counts for a proportion");
  return Estimate{static_cast<double>(k) / static_cast<double>(n), Counts{k, n}};
}

Estimate Estimate::exact(double p) { return Estimate{checked_probability(p, "probability"), std::nullopt}; }

std::optional<double> SequentialProbabilities::t_pos_tur() const {
  return p_t_pos_tur ? value(p_t_pos_tur) : value(p_t_pos);
}

std::optional<double> SequentialProbabilities::t_pos_tru() const {
  return p_t_pos_tru ? value(p_t_pos_tru) : value(p_t_pos);
}

std::optional<double> SequentialProbabilities::joint_u_pos_t_pos() const {
  return product({t_pos_tur(), value(p_u_pos_given_t_pos)});
}

std::optional<double> SequentialProbabilities::joint_r_pos_t_pos() const {
  return product({t_pos_tru(), value(p_r_pos_given_t_pos)});
}

std::optional<double> SequentialProbabilities::joint_r_pos_u_pos_t_pos() const {
  return product({t_pos_tur(), value(p_u_pos_given_t_pos), value(p_r_pos_given_u_pos_t_pos)});
}

std::optional<double> SequentialProbabilities::joint_r_pos_u_neg_t_pos() const {
  return product({t_pos_tur(), complement(p_u_pos_given_t_pos), value(p_r_pos_given_u_neg_t_pos)});
}

std::optional<double> SequentialProbabilities::joint_u_pos_r_pos_t_pos() const {
  return product({t_pos_tru(), value(p_r_pos_given_t_pos), value(p_u_pos_given_r_pos_t_pos)});
}

std::optional<double> SequentialProbabilities::joint_u_pos_r_neg_t_pos() const {
  return product({t_pos_tru(), complement(p_r_pos_given_t_pos), value(p_u_pos_given_r_neg_t_pos)});
}

void SequentialProbabilities::validate() const {
  const std::pair<const char*, const MaybeEstimate*> fields[] = {
      {"p_t_pos", &p_t_pos},
      {"p_t_pos_tur", &p_t_pos_tur},
      {"p_t_pos_tru", &p_t_pos_tru},
      {"p_u_pos_given_t_pos", &p_u_pos_given_t_pos},
      {"p_r_pos_given_u_pos_t_pos", &p_r_pos_given_u_pos_t_pos},
      {"p_r_pos_given_u_neg_t_pos", &p_r_pos_given_u_neg_t_pos},
      {"p_r_pos_given_t_pos", &p_r_pos_given_t_pos},
      {"p_u_pos_given_r_pos_t_pos", &p_u_pos_given_r_pos_t_pos},
      {"p_u_pos_given_r_neg_t_pos", &p_u_pos_given_r_neg_t_pos},
  };
  for (const auto& [name, e] : fields) {
    if (!*e) continue;
    checked_probability((*e)->p, name);
    if (const auto& c = (*e)->counts) {
      if (c->n == 0 || c->k > c->n ||
          std::abs(static_cast<double>(c->k) / static_cast<double>(c->n) - (*e)->p) > 1e-12) {
        throw Error(ErrorCode::Domain, std::string(name) + " counts are inconsistent with its probability");
      }
    }
  }
}

SequentialProbabilities aggregate(const ResponseDataset& data, const std::string& query_id) {
  GroupTally tur;
  GroupTally tru;
  for (const auto& rec : data.records()) {
    if (rec.query_id != query_id) continue;
    GroupTally& g = rec.sequence == SequenceOrder::TUR ? tur : tru;
    ++g.n;
    if (!*rec.answers[0]) continue;
    ++g.first_yes;
    if (*rec.answers[1]) {
      ++g.second_yes;
      if (*rec.answers[2]) ++g.third_yes_after_yes;
    } else if (*rec.answers[2]) {
      ++g.third_yes_after_no;
    }
  }
  if (tur.n == 0) throw Error(ErrorCode::EmptyGroup, "query '" + query_id + "' has no TUR records");
  if (tru.n == 0) throw Error(ErrorCode::EmptyGroup, "query '" + query_id + "' has no TRU records");

  SequentialProbabilities out;
  out.query_id = query_id;
  out.p_t_pos = Estimate::from_counts(tur.first_yes + tru.first_yes, tur.n + tru.n);
  out.p_t_pos_tur = Estimate::from_counts(tur.first_yes, tur.n);
  out.p_t_pos_tru = Estimate::from_counts(tru.first_yes, tru.n);

  auto& notes = out.notes;
  out.p_u_pos_given_t_pos = ratio(tur.second_yes, tur.first_yes, "P(U+|T+)", notes);
  out.p_r_pos_given_u_pos_t_pos = ratio(tur.third_yes_after_yes, tur.second_yes, "P(R+|U+,T+)", notes);
  out.p_r_pos_given_u_neg_t_pos =
      ratio(tur.third_yes_after_no, tur.first_yes - tur.second_yes, "P(R+|U-,T+)", notes);
  out.p_r_pos_given_t_pos = ratio(tru.second_yes, tru.first_yes, "P(R+|T+)", notes);
  out.p_u_pos_given_r_pos_t_pos = ratio(tru.third_yes_after_yes, tru.second_yes, "P(U+|R+,T+)", notes);
  out.p_u_pos_given_r_neg_t_pos =
      ratio(tru.third_yes_after_no, tru.first_yes - tru.second_yes, "P(U+|R-,T+)", notes);
  return out;
}

double fit_t(double p_t_pos) { return std::sqrt(checked_probability(p_t_pos, "P(T+)")); }

double fit_u(double p_u_pos_given_t_pos) { return std::sqrt(checked_probability(p_u_pos_given_t_pos, "P(U+|T+)")); }

double fit_r(double p_r_pos_given_t_pos) { return std::sqrt(checked_probability(p_r_pos_given_t_pos, "P(R+|T+)")); }

namespace {

bool degenerate(double a) { return a <= kDegenerateTol || a >= 1.0 - kDegenerateTol; }

}  // namespace

double cos_theta_raw(double u, double r, double q) {
  if (degenerate(u) || degenerate(r)) return std::numeric_limits<double>::quiet_NaN();
  const double su2 = 1.0 - u * u;
  const double sr2 = 1.0 - r * r;
  return (q - (u * r) * (u * r) - su2 * sr2) / (2.0 * u * r * std::sqrt(su2 * sr2));
}

ThetaFit fit_theta(double u, double r, double q) {
  checked_probability(u, "u");
  checked_probability(r, "r");
  checked_probability(q, "P(R+|U+,T+)");
  if (degenerate(u) || degenerate(r)) return ThetaFit{0.0, 0.0, true};
  const double c = cos_theta_raw(u, r, q);
  if (c < -1.0 - kCosClampBand || c > 1.0 + kCosClampBand) {
    std::ostringstream msg;
    msg << "cos(theta_r) = " << c << " lies outside [-1, 1]; the probabilities are not representable by this model";
    throw InfeasibleModelError(c, msg.str());
  }
  return ThetaFit{std::acos(std::clamp(c, -1.0, 1.0)), c, false};
}

FitReport fit_model(const SequentialProbabilities& agg, const std::string& query_id) {
  agg.validate();
  auto require = [&](const MaybeEstimate& e, const char* name) {
    if (!e) throw Error(ErrorCode::MissingProbability, std::string(name) + " is unavailable for query '" + query_id + "'");
    return e->p;
  };
  const double pt = require(agg.p_t_pos, "P(T+)");
  const double pu = require(agg.p_u_pos_given_t_pos, "P(U+|T+)");
  const double pr = require(agg.p_r_pos_given_t_pos, "P(R+|T+)");
  const double q = require(agg.p_r_pos_given_u_pos_t_pos, "P(R+|U+,T+)");

  const double t = fit_t(pt);
  const double u = fit_u(pu);
  const double r = fit_r(pr);

  std::vector<std::string> notes;
  double theta = 0.0;
  double cos_raw = 0.0;
  bool feasible = true;
  bool degenerate_phase = false;
  try {
    const ThetaFit tf = fit_theta(u, r, q);
    theta = tf.theta_r;
    cos_raw = tf.cos_theta_raw;
    degenerate_phase = tf.degenerate_phase;
  } catch (const InfeasibleModelError& e) {
    feasible = false;
    cos_raw = e.cos_theta_raw();
    theta = cos_raw > 0.0 ? 0.0 : std::numbers::pi;
    notes.push_back(e.what());
  }
  if (degenerate_phase) {
    notes.push_back("u or r is 0 or 1: theta_r is unidentifiable and set to 0");
  } else if (feasible) {
    notes.push_back("only cos(theta_r) is identified; theta_r is reported in [0, 180] degrees");
  }

  FitReport rep{QueryModel(query_id, RelevanceParams(t, u, r, theta), "fit"), cos_raw, feasible, degenerate_phase,
                std::nullopt, std::move(notes), pt, pu, pr, q};

  if (const auto measured = agg.joint_u_pos_r_pos_t_pos()) {
    const Judgment tru[] = {{Dimension::Topicality, Outcome::Positive},
                            {Dimension::Reliability, Outcome::Positive},
                            {Dimension::Understandability, Outcome::Positive}};
    rep.residual_tru_third_step = *measured - predict_sequence_prob(rep.model, tru);
  }
  return rep;
}

ChiSquareResult chi_square_two_proportions(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw Error(ErrorCode::Domain, "chi-square needs at least one trial per group");
  if (k1 > n1 || k2 > n2) throw Error(ErrorCode::Domain, "chi-square successes exceed trials");
  const double a = static_cast<double>(k1);
  const double b = static_cast<double>(n1 - k1);
  const double c = static_cast<double>(k2);
  const double d = static_cast<double>(n2 - k2);
  const double n = a + b + c + d;
  const double margins = (a + b) * (c + d) * (a + c) * (b + d);
  // A zero margin means both groups are all-yes or all-no: no evidence of a difference.
  if (margins == 0.0) return ChiSquareResult{0.0, 1.0};
  const double cross = a * d - b * c;
  const double stat = n * cross * cross / margins;
  // Chi-square with one degree of freedom: P(X > x) = erfc(sqrt(x / 2)).
  return ChiSquareResult{stat, std::erfc(std::sqrt(stat / 2.0))};
}

}  // namespace qrel
