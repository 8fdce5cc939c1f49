#include "qrel/quantumness.hpp"

#include <algorithm>
#include <cmath>

#include "qrel/error.hpp"

namespace qrel {

namespace {

constexpr double kNegativityTol = 1e-12;

std::optional<Counts> counts_of(const MaybeEstimate& e) {
  if (!e) return std::nullopt;
  return e->counts;
}

// Successes behind a conditional whose conditioning event may have had zero
// count; such a conditional contributes no successes.
std::optional<std::uint64_t> successes_or_zero(const MaybeEstimate& e, bool conditioning_empty) {
  if (e) {
    if (!e->counts) return std::nullopt;
    return e->counts->k;
  }
  if (conditioning_empty) return std::uint64_t{0};
  return std::nullopt;
}

EffectCell make_cell(std::string label, const MaybeEstimate& e, const MaybeEstimate* baseline) {
  EffectCell cell{std::move(label), e, std::nullopt};
  if (baseline) {
    const auto c = counts_of(e);
    const auto b = counts_of(*baseline);
    if (c && b) cell.vs_baseline = chi_square_two_proportions(c->k, c->n, b->k, b->n);
  }
  return cell;
}

}  // namespace

WignerDistribution wigner(double t_squared) {
  if (!std::isfinite(t_squared) || t_squared < 0.0 || t_squared > 1.0) {
    throw Error(ErrorCode::Domain, "t^2 must lie in [0, 1], got " + std::to_string(t_squared));
  }
  WignerDistribution d;
  d.r_x = 2.0 * std::sqrt(t_squared * (1.0 - t_squared));
  d.r_z = 2.0 * t_squared - 1.0;
  d.w[0][0] = (1.0 + d.r_x + d.r_z) / 4.0;
  d.w[0][1] = (1.0 - d.r_x + d.r_z) / 4.0;
  d.w[1][0] = (1.0 - d.r_x - d.r_z) / 4.0;
  d.w[1][1] = (1.0 + d.r_x - d.r_z) / 4.0;
  return d;
}

Negativity negativity(const WignerDistribution& w) {
  const double m = std::min({w.w[0][0], w.w[0][1], w.w[1][0], w.w[1][1]});
  return Negativity{m < -kNegativityTol, m};
}

std::vector<CommutatorEntry> commutator_report(const QueryModel& model) {
  const auto& p = model.params();
  const std::pair<Dimension, Dimension> pairs[] = {
      {Dimension::Topicality, Dimension::Understandability},
      {Dimension::Topicality, Dimension::Reliability},
      {Dimension::Reliability, Dimension::Understandability},
  };
  std::vector<CommutatorEntry> out;
  for (const auto& [a, b] : pairs) {
    const Matrix2c c = commutator(observable(p, a), observable(p, b));
    const double norm = c.frobenius_norm();
    out.push_back(CommutatorEntry{a, b, c, norm, norm < kIdentityTol});
  }
  return out;
}

LtpReport ltp_report(const SequentialProbabilities& agg, const QueryModel& model) {
  const auto direct = agg.joint_r_pos_t_pos();
  const auto via_pos = agg.joint_r_pos_u_pos_t_pos();
  const auto via_neg = agg.joint_r_pos_u_neg_t_pos();
  if (!direct) throw Error(ErrorCode::MissingProbability, "P(R+,T+) is unavailable for query '" + agg.query_id + "'");
  if (!via_pos || !via_neg) {
    throw Error(ErrorCode::MissingProbability,
                "P(R+,U+,T+) or P(R+,U-,T+) is unavailable for query '" + agg.query_id + "'");
  }

  LtpReport rep;
  rep.p_direct = *direct;
  rep.p_ltp_sum = *via_pos + *via_neg;
  rep.delta = rep.p_direct - rep.p_ltp_sum;
  rep.model_interference = interference_term(model.params());

  const auto tur = counts_of(agg.p_t_pos_tur);
  const auto tru = counts_of(agg.p_t_pos_tru);
  const auto direct_k = counts_of(agg.p_r_pos_given_t_pos);
  const auto u_pos = counts_of(agg.p_u_pos_given_t_pos);
  if (tur && tru && direct_k && u_pos) {
    const auto k_pos = successes_or_zero(agg.p_r_pos_given_u_pos_t_pos, u_pos->k == 0);
    const auto k_neg = successes_or_zero(agg.p_r_pos_given_u_neg_t_pos, u_pos->k == u_pos->n);
    if (k_pos && k_neg) {
      rep.significance = chi_square_two_proportions(direct_k->k, tru->n, *k_pos + *k_neg, tur->n);
    }
  }
  return rep;
}

EffectTables effect_tables(const SequentialProbabilities& agg) {
  EffectTables t;
  t.reliability.title = "Effect of Understandability on Reliability";
  t.reliability.baseline = make_cell("P(R+|T+)", agg.p_r_pos_given_t_pos, nullptr);
  t.reliability.given_positive = make_cell("P(R+|U+,T+)", agg.p_r_pos_given_u_pos_t_pos, &agg.p_r_pos_given_t_pos);
  t.reliability.given_negative = make_cell("P(R+|U-,T+)", agg.p_r_pos_given_u_neg_t_pos, &agg.p_r_pos_given_t_pos);

  t.understandability.title = "Effect of Reliability on Understandability";
  t.understandability.baseline = make_cell("P(U+|T+)", agg.p_u_pos_given_t_pos, nullptr);
  t.understandability.given_positive =
      make_cell("P(U+|R+,T+)", agg.p_u_pos_given_r_pos_t_pos, &agg.p_u_pos_given_t_pos);
  t.understandability.given_negative =
      make_cell("P(U+|R-,T+)", agg.p_u_pos_given_r_neg_t_pos, &agg.p_u_pos_given_t_pos);
  return t;
}

std::vector<SweepRow> sweep_theta(const RelevanceParams& p, std::size_t steps) {
  if (steps < 2) throw Error(ErrorCode::Domain, "sweep needs at least 2 steps");
  constexpr Judgment direct[] = {{Dimension::Topicality, Outcome::Positive},
                                 {Dimension::Reliability, Outcome::Positive}};
  constexpr Judgment via_pos[] = {{Dimension::Topicality, Outcome::Positive},
                                  {Dimension::Understandability, Outcome::Positive},
                                  {Dimension::Reliability, Outcome::Positive}};
  constexpr Judgment via_neg[] = {{Dimension::Topicality, Outcome::Positive},
                                  {Dimension::Understandability, Outcome::Negative},
                                  {Dimension::Reliability, Outcome::Positive}};
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double deg = 180.0 * static_cast<double>(i) / static_cast<double>(steps - 1);
    const RelevanceParams q = p.with_theta(to_radians(deg));
    rows.push_back(SweepRow{deg, interference_term(q), predict_sequence_prob(q, direct),
                            predict_sequence_prob(q, via_pos) + predict_sequence_prob(q, via_neg)});
  }
  return rows;
}

}  // namespace qrel
