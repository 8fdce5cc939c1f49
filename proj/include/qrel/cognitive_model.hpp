#pragma once

// Three-dimension relevance model. Topicality is the standard basis; the
// Understandability and Reliability bases are rotated against it by the
// amplitudes u and r, and Reliability additionally carries the phase theta_r.

#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "qrel/hilbert2.hpp"

namespace qrel {

enum class Dimension { Topicality, Understandability, Reliability };

std::string_view to_string(Dimension d) noexcept;
char dimension_letter(Dimension d) noexcept;

// One answered question: which dimension was asked and the answer given.
struct Judgment {
  Dimension dimension;
  Outcome outcome;
};

inline double to_degrees(double radians) { return radians * 180.0 / std::numbers::pi; }
inline double to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

class RelevanceParams {
 public:
  // Amplitudes must lie in [0, 1] and theta_r in [0, pi]; throws DomainError.
  RelevanceParams(double t, double u, double r, double theta_r);

  double t() const noexcept { return t_; }
  double u() const noexcept { return u_; }
  double r() const noexcept { return r_; }
  double theta_r() const noexcept { return theta_r_; }

  RelevanceParams with_theta(double theta_r) const { return RelevanceParams(t_, u_, r_, theta_r); }

 private:
  double t_;
  double u_;
  double r_;
  double theta_r_;
};

class QueryModel {
 public:
  QueryModel(std::string query_id, RelevanceParams params, std::string provenance = {});

  const std::string& query_id() const noexcept { return query_id_; }
  const RelevanceParams& params() const noexcept { return params_; }
  const std::string& provenance() const noexcept { return provenance_; }

 private:
  std::string query_id_;
  RelevanceParams params_;
  std::string provenance_;
};

// t|T+> + sqrt(1 - t^2)|T->
Ket2 initial_state(const RelevanceParams& p);

Basis2 basis_kets(const RelevanceParams& p, Dimension d);

Observable2 observable(const RelevanceParams& p, Dimension d);

// Probability of answering the judgments in the given order. Throws
// InvalidSequence on an empty sequence or when the same dimension is asked
// twice in a row.
double predict_sequence_prob(const RelevanceParams& p, std::span<const Judgment> seq);
double predict_sequence_prob(const QueryModel& m, std::span<const Judgment> seq);

// |<U+|R+>|^2 = (ur)^2 + (1-u^2)(1-r^2) + 2ur sqrt((1-u^2)(1-r^2)) cos(theta_r)
double reliability_given_understandability(double u, double r, double cos_theta);

// Int(theta_r): the gap between the direct probability t^2 r^2 of answering
// R+ right after T+, and the sum over both Understandability paths
// P(R+,U+,T+) + P(R+,U-,T+).
double interference_term(const RelevanceParams& p);

}  // namespace qrel
