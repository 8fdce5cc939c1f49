// qrel command-line front end. Talks to the library only through qrel.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrel/qrel.h"

namespace {

namespace fs = std::filesystem;

// Exit statuses.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitMissingData = 4;
constexpr int kExitIo = 5;

constexpr const char* kOutputDirEnv = "QREL_OUTPUT_DIR";

struct CliFailure {
  int exit_code;
};

int exit_code_for(qrel_status s) {
  switch (s) {
    case QREL_OK: return kExitOk;
    case QREL_E_PARSE:
    case QREL_E_SCHEMA:
    case QREL_E_UNKNOWN_SEQUENCE_TAG:
    case QREL_E_DUPLICATE_RESPONDENT: return kExitParse;
    case QREL_E_INFEASIBLE_MODEL: return kExitInfeasible;
    case QREL_E_MISSING_PROBABILITY:
    case QREL_E_EMPTY_GROUP: return kExitMissingData;
    case QREL_E_IO: return kExitIo;
    default: return kExitFailure;
  }
}

void check(qrel_status s) {
  if (s == QREL_OK) return;
  std::cerr << "qrel: " << qrel_status_name(s) << ": " << qrel_last_error() << "\n";
  throw CliFailure{exit_code_for(s)};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Dataset = std::unique_ptr<qrel_dataset, Deleter<qrel_dataset, qrel_dataset_free>>;
using Probs = std::unique_ptr<qrel_probs, Deleter<qrel_probs, qrel_probs_free>>;
using Model = std::unique_ptr<qrel_model, Deleter<qrel_model, qrel_model_free>>;

std::string take(char* s) {
  std::string out(s ? s : "");
  qrel_string_free(s);
  return out;
}

Probs load_probs(const std::string& path) {
  qrel_probs* p = nullptr;
  check(qrel_probs_load(path.c_str(), &p));
  return Probs(p);
}

Model load_model(const std::string& path) {
  qrel_model* m = nullptr;
  check(qrel_model_load(path.c_str(), &m));
  return Model(m);
}

// Explicit --output wins; otherwise a default file name inside
// $QREL_OUTPUT_DIR; otherwise nothing (stdout).
std::optional<fs::path> destination(const std::string& output, const std::string& default_name) {
  if (!output.empty()) return fs::path(output);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir && !default_name.empty()) {
    return fs::path(dir) / default_name;
  }
  return std::nullopt;
}

void emit(const std::string& text, const std::optional<fs::path>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "qrel: cannot write '" << path->string() << "'\n";
    throw CliFailure{kExitIo};
  }
}

struct Common {
  std::string format = "md";
  std::string output;

  qrel_format fmt() const { return format == "json" ? QREL_FORMAT_JSON : QREL_FORMAT_MARKDOWN; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"md", "json"}))->capture_default_str();
  cmd->add_option("--output", c.output, "Output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-space models of sequential relevance judgments"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string("qrel ") + qrel_version());

  // fit
  Common fit_opts;
  std::string fit_input;
  std::string fit_query;
  auto* fit = app.add_subcommand("fit", "Fit t, u, r, theta_r from responses or probabilities");
  fit->add_option("--input", fit_input, "Response CSV or probability JSON")->required();
  fit->add_option("--query", fit_query, "Query id (required when the input holds several)");
  add_common(fit, fit_opts);

  // report
  Common report_opts;
  std::string report_input;
  auto* report = app.add_subcommand("report", "Parameter, effect, LTP, Wigner and commutator tables");
  report->add_option("--input", report_input, "Response CSV or probability JSON")->required();
  add_common(report, report_opts);

  // wigner
  Common wigner_opts;
  std::string wigner_input;
  std::optional<double> wigner_t2;
  auto* wig = app.add_subcommand("wigner", "Discrete Wigner function and negativity");
  auto* t2_opt = wig->add_option("--t2", wigner_t2, "P(T+) of the state");
  auto* in_opt = wig->add_option("--input", wigner_input, "Response CSV or probability JSON");
  t2_opt->excludes(in_opt);
  add_common(wig, wigner_opts);

  // operators
  Common ops_opts;
  std::string ops_model;
  auto* ops = app.add_subcommand("operators", "Observables T, U, R and their commutators");
  ops->add_option("--model", ops_model, "Model document")->required();
  add_common(ops, ops_opts);

  // ltp
  Common ltp_opts;
  std::string ltp_input;
  std::string ltp_query;
  std::string ltp_model;
  auto* ltp = app.add_subcommand("ltp", "Law-of-total-probability check and interference term");
  ltp->add_option("--input", ltp_input, "Response CSV or probability JSON")->required();
  ltp->add_option("--query", ltp_query, "Query id");
  ltp->add_option("--model", ltp_model, "Model document (default: fit the input)");
  add_common(ltp, ltp_opts);

  // simulate
  Common sim_opts;
  std::string sim_model;
  std::uint64_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  double sim_tur_fraction = 0.5;
  bool sim_exact = false;
  unsigned sim_threads = 0;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic response CSV from a model");
  sim->add_option("--model", sim_model, "Model document")->required();
  sim->add_option("--n", sim_n, "Number of respondents")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  sim->add_option("--tur-fraction", sim_tur_fraction, "Share of respondents asked in TUR order")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sim->add_flag("--exact-split", sim_exact, "Split groups deterministically instead of at random");
  sim->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
  add_common(sim, sim_opts);

  // spin-demo
  Common spin_opts;
  std::string spin_setup = "a";
  std::uint64_t spin_shots = 10000;
  std::uint64_t spin_seed = 1;
  auto* spin = app.add_subcommand("spin-demo", "Stern-Gerlach cascade (setups a, b, c)");
  spin->add_option("--setup", spin_setup, "Cascade setup")->check(CLI::IsMember({"a", "b", "c"}))->capture_default_str();
  spin->add_option("--shots", spin_shots, "Particles")->check(CLI::PositiveNumber)->capture_default_str();
  spin->add_option("--seed", spin_seed, "Random seed")->capture_default_str();
  add_common(spin, spin_opts);

  // sweep-theta
  std::string sweep_model;
  std::string sweep_output;
  std::size_t sweep_steps = 19;
  auto* sweep = app.add_subcommand("sweep-theta", "Interference term over theta_r in [0, 180] degrees (CSV)");
  sweep->add_option("--model", sweep_model, "Model document")->required();
  sweep->add_option("--steps", sweep_steps, "Number of theta values")->check(CLI::Range(2, 1000000))->capture_default_str();
  sweep->add_option("--output", sweep_output, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*fit) {
      Probs probs = load_probs(fit_input);
      qrel_model* raw = nullptr;
      qrel_fit_summary summary{};
      char* text = nullptr;
      check(qrel_fit(probs.get(), fit_query.empty() ? nullptr : fit_query.c_str(), fit_opts.fmt(), &raw, &summary,
                     &text));
      Model model(raw);
      std::cout << take(text);
      if (!summary.feasible) {
        std::cerr << "qrel: model infeasible: cos(theta_r) = " << summary.cos_theta_raw << "\n";
        return kExitInfeasible;
      }
      char* doc = nullptr;
      check(qrel_model_to_json(model.get(), &doc));
      const std::string id = qrel_model_query_id(model.get());
      const auto dest = destination(fit_opts.output, id + ".model.json");
      if (!dest) std::cout << "\n";
      emit(take(doc), dest);
      if (dest) std::cerr << "model written to " << dest->string() << "\n";
    } else if (*report) {
      Probs probs = load_probs(report_input);
      char* text = nullptr;
      check(qrel_render_report(probs.get(), report_opts.fmt(), &text));
      emit(take(text), destination(report_opts.output, ""));
    } else if (*wig) {
      char* text = nullptr;
      if (!wigner_input.empty()) {
        Probs probs = load_probs(wigner_input);
        check(qrel_render_wigner(probs.get(), 0.0, wigner_opts.fmt(), &text));
      } else {
        if (!wigner_t2) {
          std::cerr << "qrel: wigner needs --t2 or --input\n";
          return kExitFailure;
        }
        check(qrel_render_wigner(nullptr, *wigner_t2, wigner_opts.fmt(), &text));
      }
      emit(take(text), destination(wigner_opts.output, ""));
    } else if (*ops) {
      Model model = load_model(ops_model);
      char* text = nullptr;
      check(qrel_render_operators(model.get(), ops_opts.fmt(), &text));
      emit(take(text), destination(ops_opts.output, ""));
    } else if (*ltp) {
      Probs probs = load_probs(ltp_input);
      Model model;
      if (!ltp_model.empty()) model = load_model(ltp_model);
      char* text = nullptr;
      check(qrel_render_ltp(probs.get(), ltp_query.empty() ? nullptr : ltp_query.c_str(), model.get(), ltp_opts.fmt(),
                            &text));
      emit(take(text), destination(ltp_opts.output, ""));
    } else if (*sim) {
      Model model = load_model(sim_model);
      const qrel_sim_options opt{sim_n, sim_seed, sim_tur_fraction, sim_exact ? 1 : 0, sim_threads};
      qrel_dataset* raw = nullptr;
      check(qrel_simulate(model.get(), &opt, &raw));
      Dataset data(raw);
      char* summary = nullptr;
      check(qrel_render_simulation(data.get(), model.get(), sim_opts.fmt(), &summary));
      const std::string id = qrel_model_query_id(model.get());
      if (const auto dest = destination(sim_opts.output, id + ".responses.csv")) {
        check(qrel_dataset_save_csv(data.get(), dest->string().c_str()));
        std::cout << take(summary);
        std::cerr << "responses written to " << dest->string() << "\n";
      } else {
        // CSV owns stdout; the summary moves to stderr.
        std::cerr << take(summary);
        char* csv = nullptr;
        check(qrel_dataset_to_csv(data.get(), &csv));
        std::cout << take(csv);
      }
    } else if (*spin) {
      char* text = nullptr;
      check(qrel_render_spin_demo(spin_setup[0], spin_shots, spin_seed, spin_opts.fmt(), &text));
      emit(take(text), destination(spin_opts.output, ""));
    } else if (*sweep) {
      Model model = load_model(sweep_model);
      char* text = nullptr;
      check(qrel_sweep_theta_csv(model.get(), sweep_steps, &text));
      const std::string id = qrel_model_query_id(model.get());
      emit(take(text), destination(sweep_output, id + ".sweep.csv"));
    }
  } catch (const CliFailure& f) {
    return f.exit_code;
  }
  return kExitOk;
}
