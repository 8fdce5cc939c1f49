#pragma once

// Monte Carlo sequential projective measurements: synthetic respondents drawn
// from a QueryModel, and Stern-Gerlach style spin cascades.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qrel/cognitive_model.hpp"
#include "qrel/estimation.hpp"
#include "qrel/hilbert2.hpp"

namespace qrel {

// Pinned generator identity. Bump when the stream derivation or the
// double conversion below changes, since golden synthetic data depends on it.
inline constexpr std::string_view kRngVersion = "mt19937_64+seed_seq/v1";

// std::mt19937_64 and std::seed_seq are specified bit-for-bit by the
// standard, which the std distributions are not. Doubles are therefore built
// from the top 53 bits of each draw.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

enum class SpinAxis { Z, X, Y };

// Spin eigenbasis expressed in the S_z basis.
Basis2 spin_basis(SpinAxis axis);

struct CascadeStage {
  Basis2 basis;
  std::optional<Outcome> block;  // outcome removed from the beam after this stage
  std::string label;             // e.g. "Z"; used in printed tables
};

class CascadeSpec {
 public:
  // Throws DomainError for zero shots or no stages.
  CascadeSpec(std::vector<CascadeStage> stages, std::uint64_t shots);

  const std::vector<CascadeStage>& stages() const noexcept { return stages_; }
  std::uint64_t shots() const noexcept { return shots_; }

 private:
  std::vector<CascadeStage> stages_;
  std::uint64_t shots_;
};

enum class SternGerlachSetup { A, B, C };

// (a) Z, block -, then Z. (b) Z, block -, then X. (c) Z, block -, X, block -, then Z.
CascadeSpec stern_gerlach_setup(SternGerlachSetup setup, std::uint64_t shots);

struct StageCounts {
  std::uint64_t positive = 0;  // particles measured +
  std::uint64_t negative = 0;  // particles measured -
  std::uint64_t passed = 0;    // particles continuing to the next stage
};

std::vector<StageCounts> run_cascade(const Ket2& initial, const CascadeSpec& spec, RngStream& rng);

// Asks the three questions in the given order, collapsing after each answer.
// All three answers are always produced. respondent_id is left empty.
ResponseRecord simulate_respondent(const QueryModel& model, SequenceOrder sequence, RngStream& rng);

struct SimOptions {
  double tur_fraction = 0.5;
  // false: each respondent joins TUR with probability tur_fraction.
  // true: the first round(n * tur_fraction) respondents are TUR, the rest TRU.
  bool exact_split = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

class SimConfig {
 public:
  // Throws DomainError if n_respondents is 0 or tur_fraction is outside [0, 1].
  SimConfig(QueryModel model, std::uint64_t n_respondents, std::uint64_t seed, SimOptions options = {});

  const QueryModel& model() const noexcept { return model_; }
  std::uint64_t n_respondents() const noexcept { return n_respondents_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const SimOptions& options() const noexcept { return options_; }

 private:
  QueryModel model_;
  std::uint64_t n_respondents_;
  std::uint64_t seed_;
  SimOptions options_;
};

// Respondent i draws from RngStream(seed, i), so the dataset depends only on
// the config and never on the thread count.
ResponseDataset simulate_dataset(const SimConfig& config);

}  // namespace qrel
