#include "qrel/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qrel/error.hpp"

namespace qrel {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

// Samples an outcome of measuring `basis` and collapses `state` onto it.
Outcome measure(Ket2& state, const Basis2& basis, RngStream& rng) {
  const double p_plus = prob_projection(state, basis.plus());
  Outcome o = rng.bernoulli(p_plus) ? Outcome::Positive : Outcome::Negative;
  // A draw can land on an outcome below the collapse threshold.
  if (prob_projection(state, basis.ket(o)) <= kCollapseThreshold) o = opposite(o);
  state = collapse(state, basis.ket(o));
  return o;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Basis2 spin_basis(SpinAxis axis) {
  const double h = std::numbers::sqrt2 / 2.0;
  const Complex i(0.0, 1.0);
  switch (axis) {
    case SpinAxis::Z: return Basis2::standard();
    case SpinAxis::X: return Basis2(Ket2::normalized(h, h), Ket2::normalized(h, -h));
    case SpinAxis::Y: return Basis2(Ket2::normalized(h, i * h), Ket2::normalized(h, -i * h));
  }
  throw Error(ErrorCode::Domain, "unknown spin axis");
}

CascadeSpec::CascadeSpec(std::vector<CascadeStage> stages, std::uint64_t shots)
    : stages_(std::move(stages)), shots_(shots) {
  if (stages_.empty()) throw Error(ErrorCode::Domain, "cascade needs at least one stage");
  if (shots_ == 0) throw Error(ErrorCode::Domain, "cascade needs at least one shot");
}

CascadeSpec stern_gerlach_setup(SternGerlachSetup setup, std::uint64_t shots) {
  const Basis2 z = spin_basis(SpinAxis::Z);
  const Basis2 x = spin_basis(SpinAxis::X);
  switch (setup) {
    case SternGerlachSetup::A:
      return CascadeSpec({{z, Outcome::Negative, "Z"}, {z, std::nullopt, "Z"}}, shots);
    case SternGerlachSetup::B:
      return CascadeSpec({{z, Outcome::Negative, "Z"}, {x, std::nullopt, "X"}}, shots);
    case SternGerlachSetup::C:
      return CascadeSpec({{z, Outcome::Negative, "Z"}, {x, Outcome::Negative, "X"}, {z, std::nullopt, "Z"}}, shots);
  }
  throw Error(ErrorCode::Domain, "unknown Stern-Gerlach setup");
}

std::vector<StageCounts> run_cascade(const Ket2& initial, const CascadeSpec& spec, RngStream& rng) {
  std::vector<StageCounts> counts(spec.stages().size());
  for (std::uint64_t shot = 0; shot < spec.shots(); ++shot) {
    Ket2 state = initial;
    for (std::size_t s = 0; s < spec.stages().size(); ++s) {
      const CascadeStage& stage = spec.stages()[s];
      const Outcome o = measure(state, stage.basis, rng);
      ++(o == Outcome::Positive ? counts[s].positive : counts[s].negative);
      if (stage.block && *stage.block == o) break;
      ++counts[s].passed;
    }
  }
  return counts;
}

ResponseRecord simulate_respondent(const QueryModel& model, SequenceOrder sequence, RngStream& rng) {
  ResponseRecord rec;
  rec.query_id = model.query_id();
  rec.sequence = sequence;
  Ket2 state = initial_state(model.params());
  for (std::size_t i = 0; i < 3; ++i) {
    const Basis2 basis = basis_kets(model.params(), dimension_at(sequence, i));
    rec.answers[i] = measure(state, basis, rng) == Outcome::Positive;
  }
  return rec;
}

SimConfig::SimConfig(QueryModel model, std::uint64_t n_respondents, std::uint64_t seed, SimOptions options)
    : model_(std::move(model)), n_respondents_(n_respondents), seed_(seed), options_(options) {
  if (n_respondents_ == 0) throw Error(ErrorCode::Domain, "simulation needs at least one respondent");
  if (!(options_.tur_fraction >= 0.0 && options_.tur_fraction <= 1.0)) {
    throw Error(ErrorCode::Domain, "tur_fraction must lie in [0, 1]");
  }
}

ResponseDataset simulate_dataset(const SimConfig& config) {
  const std::uint64_t n = config.n_respondents();
  const auto& opt = config.options();
  const auto n_tur_exact =
      static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * opt.tur_fraction));

  std::vector<ResponseRecord> records(n);
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      RngStream rng(config.seed(), i);
      const bool tur = opt.exact_split ? i < n_tur_exact : rng.bernoulli(opt.tur_fraction);
      records[i] = simulate_respondent(config.model(), tur ? SequenceOrder::TUR : SequenceOrder::TRU, rng);
      records[i].respondent_id = "r" + std::to_string(i + 1);
    }
  };

  unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, (n + 4095) / 4096));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = t * chunk;
      const std::uint64_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  return ResponseDataset(std::move(records));
}

}  // namespace qrel
