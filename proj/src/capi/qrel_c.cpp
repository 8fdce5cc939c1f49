#include "qrel/qrel.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qrel/error.hpp"
#include "qrel/io.hpp"
#include "qrel/quantumness.hpp"
#include "qrel/report.hpp"
#include "qrel/simulator.hpp"

struct qrel_dataset {
  qrel::ResponseDataset data;
};

struct qrel_probs {
  std::vector<qrel::SequentialProbabilities> queries;
};

struct qrel_model {
  qrel::QueryModel model;
};

namespace {

thread_local std::string g_last_error;

// Caller passed an argument the API cannot interpret.
struct BadArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

qrel_status status_of(qrel::ErrorCode code) {
  switch (code) {
    case qrel::ErrorCode::Domain: return QREL_E_DOMAIN;
    case qrel::ErrorCode::ZeroProbabilityCollapse: return QREL_E_ZERO_PROBABILITY_COLLAPSE;
    case qrel::ErrorCode::InvalidSequence: return QREL_E_INVALID_SEQUENCE;
    case qrel::ErrorCode::EmptyGroup: return QREL_E_EMPTY_GROUP;
    case qrel::ErrorCode::MissingProbability: return QREL_E_MISSING_PROBABILITY;
    case qrel::ErrorCode::InfeasibleModel: return QREL_E_INFEASIBLE_MODEL;
    case qrel::ErrorCode::Parse: return QREL_E_PARSE;
    case qrel::ErrorCode::DuplicateRespondent: return QREL_E_DUPLICATE_RESPONDENT;
    case qrel::ErrorCode::UnknownSequenceTag: return QREL_E_UNKNOWN_SEQUENCE_TAG;
    case qrel::ErrorCode::Schema: return QREL_E_SCHEMA;
    case qrel::ErrorCode::Io: return QREL_E_IO;
  }
  return QREL_E_INTERNAL;
}

qrel_status fail(qrel_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
qrel_status guarded(F&& body) {
  try {
    body();
    return QREL_OK;
  } catch (const qrel::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const BadArgument& e) {
    return fail(QREL_E_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QREL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QREL_E_INTERNAL, e.what());
  } catch (...) {
    return fail(QREL_E_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qrel::Format format_of(qrel_format f) {
  switch (f) {
    case QREL_FORMAT_MARKDOWN: return qrel::Format::Markdown;
    case QREL_FORMAT_JSON: return qrel::Format::Json;
  }
  throw BadArgument("unknown output format");
}

qrel::Dimension dimension_of(qrel_dimension d) {
  switch (d) {
    case QREL_TOPICALITY: return qrel::Dimension::Topicality;
    case QREL_UNDERSTANDABILITY: return qrel::Dimension::Understandability;
    case QREL_RELIABILITY: return qrel::Dimension::Reliability;
  }
  throw BadArgument("unknown dimension");
}

qrel::SternGerlachSetup setup_of(char c) {
  switch (c) {
    case 'a': case 'A': return qrel::SternGerlachSetup::A;
    case 'b': case 'B': return qrel::SternGerlachSetup::B;
    case 'c': case 'C': return qrel::SternGerlachSetup::C;
  }
  throw BadArgument(std::string("unknown Stern-Gerlach setup '") + c + "'");
}

qrel_params params_of(const qrel::RelevanceParams& p) { return qrel_params{p.t(), p.u(), p.r(), p.theta_r()}; }

const qrel::SequentialProbabilities& select_query(const qrel_probs* probs, const char* query_id) {
  if (!query_id) {
    if (probs->queries.size() != 1) {
      throw BadArgument("input holds " + std::to_string(probs->queries.size()) + " queries; choose one");
    }
    return probs->queries.front();
  }
  for (const auto& q : probs->queries) {
    if (q.query_id == query_id) return q;
  }
  throw qrel::Error(qrel::ErrorCode::MissingProbability, std::string("no data for query '") + query_id + "'");
}

struct CascadeRun {
  qrel::CascadeSpec spec;
  std::vector<qrel::StageCounts> counts;
};

// Cascades start from an S_x+ beam so the first Z stage splits it.
CascadeRun cascade(char setup, std::uint64_t shots, std::uint64_t seed) {
  CascadeRun run{qrel::stern_gerlach_setup(setup_of(setup), shots), {}};
  qrel::RngStream rng(seed, 0);
  run.counts = qrel::run_cascade(qrel::spin_basis(qrel::SpinAxis::X).plus(), run.spec, rng);
  return run;
}

}  // namespace

#define QREL_REQUIRE(cond)                                                      \
  do {                                                                          \
    if (!(cond)) return fail(QREL_E_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

extern "C" {

QREL_API const char* qrel_version(void) { return "0.1.0"; }

QREL_API const char* qrel_rng_version(void) { return qrel::kRngVersion.data(); }

QREL_API const char* qrel_last_error(void) { return g_last_error.c_str(); }

QREL_API const char* qrel_status_name(qrel_status status) {
  switch (status) {
    case QREL_OK: return "ok";
    case QREL_E_DOMAIN: return "domain error";
    case QREL_E_ZERO_PROBABILITY_COLLAPSE: return "zero-probability collapse";
    case QREL_E_INVALID_SEQUENCE: return "invalid sequence";
    case QREL_E_EMPTY_GROUP: return "empty group";
    case QREL_E_MISSING_PROBABILITY: return "missing probability";
    case QREL_E_INFEASIBLE_MODEL: return "model infeasible";
    case QREL_E_PARSE: return "parse error";
    case QREL_E_DUPLICATE_RESPONDENT: return "duplicate respondent";
    case QREL_E_UNKNOWN_SEQUENCE_TAG: return "unknown sequence tag";
    case QREL_E_SCHEMA: return "schema error";
    case QREL_E_IO: return "i/o error";
    case QREL_E_INVALID_ARGUMENT: return "invalid argument";
    case QREL_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

QREL_API void qrel_string_free(char* s) { std::free(s); }

QREL_API qrel_status qrel_dataset_load_csv(const char* path, qrel_dataset** out) {
  QREL_REQUIRE(path && out);
  return guarded([&] { *out = new qrel_dataset{qrel::load_responses(path)}; });
}

QREL_API qrel_status qrel_dataset_save_csv(const qrel_dataset* data, const char* path) {
  QREL_REQUIRE(data && path);
  return guarded([&] { qrel::save_responses(path, data->data); });
}

QREL_API qrel_status qrel_dataset_to_csv(const qrel_dataset* data, char** out) {
  QREL_REQUIRE(data && out);
  return guarded([&] {
    std::ostringstream os;
    qrel::write_responses(os, data->data);
    *out = copy_string(os.str());
  });
}

QREL_API size_t qrel_dataset_size(const qrel_dataset* data) { return data ? data->data.size() : 0; }

QREL_API void qrel_dataset_free(qrel_dataset* data) { delete data; }

QREL_API qrel_status qrel_probs_from_dataset(const qrel_dataset* data, qrel_probs** out) {
  QREL_REQUIRE(data && out);
  return guarded([&] {
    auto p = std::make_unique<qrel_probs>();
    for (const auto& q : data->data.query_ids()) p->queries.push_back(qrel::aggregate(data->data, q));
    *out = p.release();
  });
}

QREL_API qrel_status qrel_probs_load(const char* path, qrel_probs** out) {
  QREL_REQUIRE(path && out);
  return guarded([&] { *out = new qrel_probs{qrel::load_probability_source(path)}; });
}

QREL_API size_t qrel_probs_count(const qrel_probs* probs) { return probs ? probs->queries.size() : 0; }

QREL_API const char* qrel_probs_query_id(const qrel_probs* probs, size_t index) {
  if (!probs || index >= probs->queries.size()) return nullptr;
  return probs->queries[index].query_id.c_str();
}

QREL_API void qrel_probs_free(qrel_probs* probs) { delete probs; }

QREL_API qrel_status qrel_model_create(const char* query_id, const qrel_params* params, qrel_model** out) {
  QREL_REQUIRE(query_id && params && out);
  return guarded([&] {
    *out = new qrel_model{
        qrel::QueryModel(query_id, qrel::RelevanceParams(params->t, params->u, params->r, params->theta_r), "manual")};
  });
}

QREL_API qrel_status qrel_model_load(const char* path, qrel_model** out) {
  QREL_REQUIRE(path && out);
  return guarded([&] { *out = new qrel_model{qrel::load_model(path)}; });
}

QREL_API qrel_status qrel_model_save(const qrel_model* model, const char* path) {
  QREL_REQUIRE(model && path);
  return guarded([&] { qrel::save_model(path, model->model); });
}

QREL_API qrel_status qrel_model_to_json(const qrel_model* model, char** out) {
  QREL_REQUIRE(model && out);
  return guarded([&] { *out = copy_string(qrel::model_to_json(model->model)); });
}

QREL_API qrel_status qrel_model_params(const qrel_model* model, qrel_params* out) {
  QREL_REQUIRE(model && out);
  *out = params_of(model->model.params());
  return QREL_OK;
}

QREL_API const char* qrel_model_query_id(const qrel_model* model) {
  return model ? model->model.query_id().c_str() : nullptr;
}

QREL_API void qrel_model_free(qrel_model* model) { delete model; }

QREL_API qrel_status qrel_fit(const qrel_probs* probs, const char* query_id, qrel_format fmt, qrel_model** model,
                              qrel_fit_summary* summary, char** report) {
  QREL_REQUIRE(probs);
  return guarded([&] {
    const auto& agg = select_query(probs, query_id);
    const qrel::FitReport fit = qrel::fit_model(agg, agg.query_id);
    std::string text;
    if (report) text = qrel::render_fit(fit, format_of(fmt));
    if (summary) {
      summary->params = params_of(fit.model.params());
      summary->cos_theta_raw = fit.cos_theta_raw;
      summary->feasible = fit.feasible ? 1 : 0;
      summary->degenerate_phase = fit.degenerate_phase ? 1 : 0;
      summary->has_residual = fit.residual_tru_third_step ? 1 : 0;
      summary->residual_tru_third_step = fit.residual_tru_third_step.value_or(0.0);
    }
    std::unique_ptr<qrel_model> m;
    if (model) m.reset(new qrel_model{fit.model});
    if (report) *report = copy_string(text);
    if (model) *model = m.release();
  });
}

QREL_API qrel_status qrel_predict(const qrel_model* model, const qrel_judgment* seq, size_t len, double* out) {
  QREL_REQUIRE(model && out && (seq || len == 0));
  return guarded([&] {
    std::vector<qrel::Judgment> js;
    for (size_t i = 0; i < len; ++i) {
      js.push_back({dimension_of(seq[i].dimension), seq[i].positive ? qrel::Outcome::Positive : qrel::Outcome::Negative});
    }
    *out = qrel::predict_sequence_prob(model->model, js);
  });
}

QREL_API qrel_status qrel_interference(const qrel_model* model, double* out) {
  QREL_REQUIRE(model && out);
  return guarded([&] { *out = qrel::interference_term(model->model.params()); });
}

QREL_API qrel_status qrel_commutator_norms(const qrel_model* model, double out[3]) {
  QREL_REQUIRE(model && out);
  return guarded([&] {
    const auto entries = qrel::commutator_report(model->model);
    for (size_t i = 0; i < 3; ++i) out[i] = entries[i].frobenius_norm;
  });
}

QREL_API qrel_status qrel_wigner(double t_squared, double w[4], int* has_negative, double* min_entry) {
  QREL_REQUIRE(w);
  return guarded([&] {
    const auto d = qrel::wigner(t_squared);
    const auto neg = qrel::negativity(d);
    w[0] = d.w[0][0];
    w[1] = d.w[0][1];
    w[2] = d.w[1][0];
    w[3] = d.w[1][1];
    if (has_negative) *has_negative = neg.has_negative ? 1 : 0;
    if (min_entry) *min_entry = neg.min_entry;
  });
}

QREL_API qrel_status qrel_chi_square(uint64_t k1, uint64_t n1, uint64_t k2, uint64_t n2, double* statistic,
                                     double* p_value) {
  QREL_REQUIRE(statistic && p_value);
  return guarded([&] {
    const auto r = qrel::chi_square_two_proportions(k1, n1, k2, n2);
    *statistic = r.statistic;
    *p_value = r.p_value;
  });
}

QREL_API qrel_status qrel_render_report(const qrel_probs* probs, qrel_format fmt, char** out) {
  QREL_REQUIRE(probs && out);
  return guarded([&] { *out = copy_string(qrel::render_report(probs->queries, format_of(fmt))); });
}

QREL_API qrel_status qrel_render_wigner(const qrel_probs* probs, double t_squared, qrel_format fmt, char** out) {
  QREL_REQUIRE(out);
  return guarded([&] {
    std::vector<std::pair<std::string, double>> states;
    if (probs) {
      for (const auto& q : probs->queries) {
        const auto fit = qrel::fit_model(q, q.query_id);
        const double t = fit.model.params().t();
        states.emplace_back(q.query_id, t * t);
      }
    } else {
      states.emplace_back("state", t_squared);
    }
    *out = copy_string(qrel::render_wigner(states, format_of(fmt)));
  });
}

QREL_API qrel_status qrel_render_operators(const qrel_model* model, qrel_format fmt, char** out) {
  QREL_REQUIRE(model && out);
  return guarded([&] { *out = copy_string(qrel::render_operators(model->model, format_of(fmt))); });
}

QREL_API qrel_status qrel_render_ltp(const qrel_probs* probs, const char* query_id, const qrel_model* model,
                                     qrel_format fmt, char** out) {
  QREL_REQUIRE(probs && out);
  return guarded([&] {
    std::vector<qrel::LtpRow> rows;
    auto add = [&](const qrel::SequentialProbabilities& agg) {
      if (model) {
        rows.push_back({agg.query_id, qrel::ltp_report(agg, model->model)});
      } else {
        const auto fit = qrel::fit_model(agg, agg.query_id);
        rows.push_back({agg.query_id, qrel::ltp_report(agg, fit.model)});
      }
    };
    if (query_id || model) {
      add(select_query(probs, query_id ? query_id : model->model.query_id().c_str()));
    } else {
      for (const auto& q : probs->queries) add(q);
    }
    *out = copy_string(qrel::render_ltp(rows, format_of(fmt)));
  });
}

QREL_API qrel_status qrel_sweep_theta_csv(const qrel_model* model, size_t steps, char** out) {
  QREL_REQUIRE(model && out);
  return guarded([&] { *out = copy_string(qrel::render_sweep_csv(qrel::sweep_theta(model->model.params(), steps))); });
}

QREL_API qrel_status qrel_simulate(const qrel_model* model, const qrel_sim_options* options, qrel_dataset** out) {
  QREL_REQUIRE(model && options && out);
  return guarded([&] {
    qrel::SimOptions opt{options->tur_fraction, options->exact_split != 0, options->threads};
    const qrel::SimConfig cfg(model->model, options->n_respondents, options->seed, opt);
    *out = new qrel_dataset{qrel::simulate_dataset(cfg)};
  });
}

QREL_API qrel_status qrel_render_simulation(const qrel_dataset* data, const qrel_model* model, qrel_format fmt,
                                            char** out) {
  QREL_REQUIRE(data && model && out);
  return guarded([&] { *out = copy_string(qrel::render_simulation_summary(data->data, model->model, format_of(fmt))); });
}

QREL_API qrel_status qrel_spin_cascade(char setup, uint64_t shots, uint64_t seed, qrel_stage_counts counts[3],
                                       size_t* stages) {
  QREL_REQUIRE(counts && stages);
  return guarded([&] {
    const auto run = cascade(setup, shots, seed);
    const auto& c = run.counts;
    for (size_t i = 0; i < c.size(); ++i) counts[i] = qrel_stage_counts{c[i].positive, c[i].negative, c[i].passed};
    *stages = c.size();
  });
}

QREL_API qrel_status qrel_render_spin_demo(char setup, uint64_t shots, uint64_t seed, qrel_format fmt, char** out) {
  QREL_REQUIRE(out);
  return guarded([&] {
    const auto run = cascade(setup, shots, seed);
    *out = copy_string(qrel::render_cascade(setup_of(setup), run.spec, run.counts, format_of(fmt)));
  });
}

}  // extern "C"
