#pragma once

// Human- and machine-readable renderings. Probabilities are always shown
// rounded to 4 decimals, angles in degrees to 2 decimals.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrel/estimation.hpp"
#include "qrel/quantumness.hpp"
#include "qrel/simulator.hpp"

namespace qrel {

enum class Format { Markdown, Json };

std::optional<Format> parse_format(std::string_view tag) noexcept;

// "%.{digits}f" without a negative sign on values that round to zero.
std::string fixed(double x, int digits = 4);

std::string render_fit(const FitReport& fit, Format fmt);

// Parameter table, effect tables, LTP table, Wigner functions and commutator
// norms for every query.
std::string render_report(const std::vector<SequentialProbabilities>& queries, Format fmt);

// (label, t^2) pairs.
std::string render_wigner(const std::vector<std::pair<std::string, double>>& states, Format fmt);

std::string render_operators(const QueryModel& model, Format fmt);

struct LtpRow {
  std::string query_id;
  LtpReport report;
};
std::string render_ltp(const std::vector<LtpRow>& rows, Format fmt);

// Empirical sequential probabilities of a simulated dataset next to the
// generating model's predictions.
std::string render_simulation_summary(const ResponseDataset& data, const QueryModel& model, Format fmt);

std::string render_cascade(SternGerlachSetup setup, const CascadeSpec& spec, const std::vector<StageCounts>& counts,
                           Format fmt);

// theta_deg,interference,p_direct,p_ltp_sum
std::string render_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qrel
