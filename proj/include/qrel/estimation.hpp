#pragma once

// From sequential yes/no answers to fitted model parameters.
//
// Respondents are split between two question orders. The TUR group
// (Topicality, Understandability, Reliability) supplies P(U+|T+) and
// P(R+|U+,T+); the TRU group supplies P(R+|T+). Conditionals are always
// estimated inside the group that asked the questions in that order.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "qrel/cognitive_model.hpp"

namespace qrel {

enum class SequenceOrder { TUR, TRU };

std::string_view to_string(SequenceOrder s) noexcept;
std::optional<SequenceOrder> parse_sequence_order(std::string_view tag) noexcept;

// Dimension asked at position i (0, 1, 2) under the given order.
Dimension dimension_at(SequenceOrder s, std::size_t i) noexcept;

// Empty when the question was not asked (questions after a "no" on
// Topicality may be skipped).
using Answer = std::optional<bool>;

struct ResponseRecord {
  std::string respondent_id;
  std::string query_id;
  SequenceOrder sequence = SequenceOrder::TUR;
  std::array<Answer, 3> answers;  // in asked order; answers[0] is Topicality
};

// Throws DomainError for records the estimator cannot use: missing ids, no
// Topicality answer, a later answer missing after "yes" on Topicality, or an
// answer present after a skipped question.
void validate_record(const ResponseRecord& rec);

class ResponseDataset {
 public:
  ResponseDataset() = default;
  explicit ResponseDataset(std::vector<ResponseRecord> records);

  // Throws DuplicateRespondent if (respondent_id, query_id) is already present.
  void add(ResponseRecord rec);

  const std::vector<ResponseRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  // Distinct query ids in order of first appearance.
  std::vector<std::string> query_ids() const;

 private:
  std::vector<ResponseRecord> records_;
  std::unordered_set<std::string> keys_;
};

struct Counts {
  std::uint64_t k = 0;  // successes
  std::uint64_t n = 0;  // trials
};

// A probability, with the counts behind it when it came from raw data.
struct Estimate {
  double p = 0.0;
  std::optional<Counts> counts;

  static Estimate from_counts(std::uint64_t k, std::uint64_t n);
  static Estimate exact(double p);
};

using MaybeEstimate = std::optional<Estimate>;

struct SequentialProbabilities {
  std::string query_id;

  MaybeEstimate p_t_pos;      // pooled over both groups
  MaybeEstimate p_t_pos_tur;  // TUR group only
  MaybeEstimate p_t_pos_tru;  // TRU group only

  MaybeEstimate p_u_pos_given_t_pos;          // TUR
  MaybeEstimate p_r_pos_given_u_pos_t_pos;    // TUR
  MaybeEstimate p_r_pos_given_u_neg_t_pos;    // TUR
  MaybeEstimate p_r_pos_given_t_pos;          // TRU
  MaybeEstimate p_u_pos_given_r_pos_t_pos;    // TRU
  MaybeEstimate p_u_pos_given_r_neg_t_pos;    // TRU

  // Reasons for any probability left unavailable.
  std::vector<std::string> notes;

  // P(T+) as seen by each group; falls back to the pooled value.
  std::optional<double> t_pos_tur() const;
  std::optional<double> t_pos_tru() const;

  // Joint probabilities of answer sequences, as products of the group's
  // conditionals. The argument order follows the convention P(last, ..., first).
  std::optional<double> joint_u_pos_t_pos() const;
  std::optional<double> joint_r_pos_t_pos() const;
  std::optional<double> joint_r_pos_u_pos_t_pos() const;
  std::optional<double> joint_r_pos_u_neg_t_pos() const;
  std::optional<double> joint_u_pos_r_pos_t_pos() const;
  std::optional<double> joint_u_pos_r_neg_t_pos() const;

  // Throws DomainError if any present probability is outside [0, 1] or a
  // counts pair is inconsistent with its probability.
  void validate() const;
};

// Throws EmptyGroup if either order has no records for the query.
SequentialProbabilities aggregate(const ResponseDataset& data, const std::string& query_id);

double fit_t(double p_t_pos);
double fit_u(double p_u_pos_given_t_pos);
double fit_r(double p_r_pos_given_t_pos);

// Values of cos(theta_r) within this distance of [-1, 1] are clamped.
inline constexpr double kCosClampBand = 1e-6;
// u or r this close to 0 or 1 leaves theta_r unidentifiable.
inline constexpr double kDegenerateTol = 1e-9;

// cos(theta_r) solving |<U+|R+>|^2 = q before any clamping. NaN when the
// phase is degenerate.
double cos_theta_raw(double u, double r, double q);

struct ThetaFit {
  double theta_r = 0.0;  // radians, in [0, pi]
  double cos_theta_raw = 0.0;
  bool degenerate_phase = false;
};

// q is P(R+|U+,T+). Throws InfeasibleModelError when cos(theta_r) falls
// outside the clamp band. A degenerate phase returns theta_r = 0 and the flag.
ThetaFit fit_theta(double u, double r, double q);

struct FitReport {
  QueryModel model;
  double cos_theta_raw = 0.0;
  bool feasible = true;
  bool degenerate_phase = false;
  // Measured minus predicted P(U+,R+,T+) for the TRU order, when measured.
  std::optional<double> residual_tru_third_step;
  std::vector<std::string> notes;

  // The four probabilities the fit consumed.
  double p_t_pos = 0.0;
  double p_u_pos_given_t_pos = 0.0;
  double p_r_pos_given_t_pos = 0.0;
  double p_r_pos_given_u_pos_t_pos = 0.0;
};

// Fits t, u, r, theta_r. Throws MissingProbability if an input is absent.
// Infeasible data does not throw: the report has feasible = false and theta_r
// at the nearer end of [0, pi].
FitReport fit_model(const SequentialProbabilities& agg, const std::string& query_id);

struct ChiSquareResult {
  static constexpr double kAlpha = 0.05;
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant() const noexcept { return p_value < kAlpha; }
};

// Pearson chi-square for equality of k1/n1 and k2/n2 (2x2 table, one degree
// of freedom, no continuity correction).
ChiSquareResult chi_square_two_proportions(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2);

}  // namespace qrel
