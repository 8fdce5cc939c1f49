#pragma once

// Diagnostics that separate the fitted model from a classical one: Wigner
// negativity, non-commuting observables, and the interference that breaks
// the law of total probability.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qrel/cognitive_model.hpp"
#include "qrel/estimation.hpp"

namespace qrel {

// Discrete Wigner quasi-probability table of the Topicality state.
struct WignerDistribution {
  std::array<std::array<double, 2>, 2> w{};
  double r_x = 0.0;
  double r_z = 0.0;
};

// r_x = 2 sqrt(t^2 (1 - t^2)), r_z = 2 t^2 - 1,
// W = 1/4 [[1 + r_x + r_z, 1 - r_x + r_z], [1 - r_x - r_z, 1 + r_x - r_z]].
WignerDistribution wigner(double t_squared);

struct Negativity {
  bool has_negative = false;
  double min_entry = 0.0;
};

Negativity negativity(const WignerDistribution& w);

struct CommutatorEntry {
  Dimension first;
  Dimension second;
  Matrix2c value;
  double frobenius_norm = 0.0;
  bool commutes = false;  // norm below kIdentityTol
};

// [T,U], [T,R] and [R,U] for the model's observables.
std::vector<CommutatorEntry> commutator_report(const QueryModel& model);

struct LtpReport {
  double p_direct = 0.0;   // P(R+,T+) measured in the TRU order
  double p_ltp_sum = 0.0;  // P(R+,U+,T+) + P(R+,U-,T+) measured in the TUR order
  double delta = 0.0;      // p_direct - p_ltp_sum
  double model_interference = 0.0;
  std::optional<ChiSquareResult> significance;  // only when counts exist
};

// Throws MissingProbability if either side cannot be formed.
LtpReport ltp_report(const SequentialProbabilities& agg, const QueryModel& model);

struct EffectCell {
  std::string label;
  MaybeEstimate estimate;
  std::optional<ChiSquareResult> vs_baseline;  // absent for the baseline itself
};

struct EffectTable {
  std::string title;
  EffectCell baseline;
  EffectCell given_positive;
  EffectCell given_negative;
};

struct EffectTables {
  EffectTable reliability;          // P(R+|T+) against P(R+|U+-,T+)
  EffectTable understandability;    // P(U+|T+) against P(U+|R+-,T+)
};

// Cells whose conditioning event never occurred are left empty. Significance
// is tested against the baseline whenever both sides carry counts.
EffectTables effect_tables(const SequentialProbabilities& agg);

struct SweepRow {
  double theta_deg = 0.0;
  double interference = 0.0;
  double p_direct = 0.0;
  double p_ltp_sum = 0.0;
};

// theta_r over [0, 180] degrees in `steps` evenly spaced points, t, u, r fixed.
// Throws DomainError if steps < 2.
std::vector<SweepRow> sweep_theta(const RelevanceParams& p, std::size_t steps);

}  // namespace qrel
