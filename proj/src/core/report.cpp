#include "qrel/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qrel/error.hpp"

namespace qrel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double round4(double x) {
  const double r = std::round(x * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

double round2(double x) {
  const double r = std::round(x * 1e2) / 1e2;
  return r == 0.0 ? 0.0 : r;
}

ordered_json num4(std::optional<double> x) { return x ? ordered_json(round4(*x)) : ordered_json(nullptr); }

std::string cell(std::optional<double> x) { return x ? fixed(*x) : "n/a"; }

std::optional<double> value_of(const MaybeEstimate& e) {
  if (!e) return std::nullopt;
  return e->p;
}

std::string escape_md(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Fit for report purposes; missing inputs leave the query without a model.
struct QueryAnalysis {
  const SequentialProbabilities* agg;
  std::optional<FitReport> fit;
  std::string fit_error;
};

std::vector<QueryAnalysis> analyse(const std::vector<SequentialProbabilities>& queries) {
  std::vector<QueryAnalysis> out;
  for (const auto& q : queries) {
    QueryAnalysis a{&q, std::nullopt, {}};
    try {
      a.fit = fit_model(q, q.query_id);
    } catch (const Error& e) {
      a.fit_error = e.what();
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct ParamRow {
  const char* label;
  std::optional<double> (*get)(const QueryAnalysis&);
};

const ParamRow kParamRows[] = {
    {"P(T+)", [](const QueryAnalysis& a) { return value_of(a.agg->p_t_pos); }},
    {"P(U+,T+)", [](const QueryAnalysis& a) { return a.agg->joint_u_pos_t_pos(); }},
    {"P(R+,T+)", [](const QueryAnalysis& a) { return a.agg->joint_r_pos_t_pos(); }},
    {"P(R+,U+,T+)", [](const QueryAnalysis& a) { return a.agg->joint_r_pos_u_pos_t_pos(); }},
    {"P(R+,U-,T+)", [](const QueryAnalysis& a) { return a.agg->joint_r_pos_u_neg_t_pos(); }},
    {"P(U+,R+,T+)", [](const QueryAnalysis& a) { return a.agg->joint_u_pos_r_pos_t_pos(); }},
    {"P(U+,R-,T+)", [](const QueryAnalysis& a) { return a.agg->joint_u_pos_r_neg_t_pos(); }},
    {"t^2",
     [](const QueryAnalysis& a) -> std::optional<double> {
       if (!a.fit) return std::nullopt;
       const double t = a.fit->model.params().t();
       return t * t;
     }},
    {"u^2",
     [](const QueryAnalysis& a) -> std::optional<double> {
       if (!a.fit) return std::nullopt;
       const double u = a.fit->model.params().u();
       return u * u;
     }},
    {"r^2",
     [](const QueryAnalysis& a) -> std::optional<double> {
       if (!a.fit) return std::nullopt;
       const double r = a.fit->model.params().r();
       return r * r;
     }},
};

std::string theta_cell(const QueryAnalysis& a) {
  if (!a.fit) return "n/a";
  std::string s = fixed(to_degrees(a.fit->model.params().theta_r()), 2);
  if (!a.fit->feasible) s += " (infeasible)";
  if (a.fit->degenerate_phase) s += " (degenerate)";
  return s;
}

std::string effect_cell_md(const EffectCell& c) {
  std::string s = cell(value_of(c.estimate));
  if (c.vs_baseline && c.vs_baseline->significant()) s += "*";
  return s;
}

ordered_json effect_cell_json(const EffectCell& c) {
  ordered_json j;
  j["label"] = c.label;
  j["value"] = num4(value_of(c.estimate));
  if (c.estimate && c.estimate->counts) j["counts"] = {{"k", c.estimate->counts->k}, {"n", c.estimate->counts->n}};
  if (c.vs_baseline) {
    j["chi_square"] = round4(c.vs_baseline->statistic);
    j["p_value"] = round4(c.vs_baseline->p_value);
    j["significant"] = c.vs_baseline->significant();
  }
  return j;
}

std::string matrix_entry(Complex z) {
  const double re = z.real();
  const double im = z.imag();
  if (std::abs(im) < 5e-5) return fixed(re);
  if (std::abs(re) < 5e-5) return fixed(im) + "i";
  return fixed(re) + (im < 0 ? " - " : " + ") + fixed(std::abs(im)) + "i";
}

std::string polar_entry(Complex z) {
  return fixed(std::abs(z)) + " e^{i " + fixed(to_degrees(std::arg(z)), 2) + " deg}";
}

ordered_json matrix_json(const Matrix2c& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < 2; ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < 2; ++c) row.push_back({round4(m(r, c).real()), round4(m(r, c).imag())});
    rows.push_back(row);
  }
  return rows;
}

void md_matrix(std::ostringstream& os, const Matrix2c& m, std::string (*entry)(Complex)) {
  os << "| | |\n|---|---|\n";
  for (std::size_t r = 0; r < 2; ++r) os << "| " << entry(m(r, 0)) << " | " << entry(m(r, 1)) << " |\n";
}

std::string commutator_name(const CommutatorEntry& c) {
  return std::string("[") + dimension_letter(c.first) + "," + dimension_letter(c.second) + "]";
}

ordered_json wigner_json(const WignerDistribution& w) {
  const Negativity neg = negativity(w);
  ordered_json j;
  j["r_x"] = round4(w.r_x);
  j["r_z"] = round4(w.r_z);
  j["w"] = {{round4(w.w[0][0]), round4(w.w[0][1])}, {round4(w.w[1][0]), round4(w.w[1][1])}};
  j["has_negative"] = neg.has_negative;
  j["min_entry"] = round4(neg.min_entry);
  return j;
}

void wigner_md(std::ostringstream& os, const std::string& label, double t2) {
  const WignerDistribution w = wigner(t2);
  const Negativity neg = negativity(w);
  os << "### " << label << " (t^2 = " << fixed(t2) << ")\n\n";
  os << "| | |\n|---|---|\n";
  for (const auto& row : w.w) os << "| " << fixed(row[0]) << " | " << fixed(row[1]) << " |\n";
  os << "\nr_x = " << fixed(w.r_x) << ", r_z = " << fixed(w.r_z) << "; negative entries: "
     << (neg.has_negative ? "yes" : "no") << " (min " << fixed(neg.min_entry) << ")\n\n";
}

ordered_json ltp_json(const std::string& query_id, const LtpReport& l) {
  ordered_json j;
  j["query_id"] = query_id;
  j["p_ltp_sum"] = round4(l.p_ltp_sum);
  j["p_direct"] = round4(l.p_direct);
  j["delta"] = round4(l.delta);
  j["model_interference"] = round4(l.model_interference);
  if (l.significance) {
    j["chi_square"] = round4(l.significance->statistic);
    j["p_value"] = round4(l.significance->p_value);
    j["significant"] = l.significance->significant();
  }
  return j;
}

void ltp_md_table(std::ostringstream& os, const std::vector<LtpRow>& rows) {
  os << "| Query | P(R+,U+,T+) + P(R+,U-,T+) | P(R+,T+) | difference | model Int(theta_r) | p-value |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    const auto& l = r.report;
    os << "| " << r.query_id << " | " << fixed(l.p_ltp_sum) << " | " << fixed(l.p_direct) << " | " << fixed(l.delta)
       << " | " << fixed(l.model_interference) << " | "
       << (l.significance ? fixed(l.significance->p_value) : std::string("n/a")) << " |\n";
  }
}

}  // namespace

std::optional<Format> parse_format(std::string_view tag) noexcept {
  if (tag == "md" || tag == "markdown") return Format::Markdown;
  if (tag == "json") return Format::Json;
  return std::nullopt;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string render_fit(const FitReport& fit, Format fmt) {
  const auto& p = fit.model.params();
  if (fmt == Format::Json) {
    ordered_json j;
    j["query_id"] = fit.model.query_id();
    j["t"] = round4(p.t());
    j["u"] = round4(p.u());
    j["r"] = round4(p.r());
    j["t_squared"] = round4(p.t() * p.t());
    j["u_squared"] = round4(p.u() * p.u());
    j["r_squared"] = round4(p.r() * p.r());
    j["theta_r_deg"] = round2(to_degrees(p.theta_r()));
    j["cos_theta_raw"] = round4(fit.cos_theta_raw);
    j["feasible"] = fit.feasible;
    j["degenerate_phase"] = fit.degenerate_phase;
    j["residual_tru_third_step"] = num4(fit.residual_tru_third_step);
    j["notes"] = fit.notes;
    return dump(j);
  }
  std::ostringstream os;
  os << "## Fit: " << fit.model.query_id() << "\n\n";
  os << "| Parameter | Value |\n|---|---|\n";
  os << "| t^2 | " << fixed(p.t() * p.t()) << " |\n";
  os << "| u^2 | " << fixed(p.u() * p.u()) << " |\n";
  os << "| r^2 | " << fixed(p.r() * p.r()) << " |\n";
  os << "| theta_r (deg) | " << fixed(to_degrees(p.theta_r()), 2) << " |\n";
  os << "| cos(theta_r) raw | " << fixed(fit.cos_theta_raw) << " |\n";
  os << "| feasible | " << (fit.feasible ? "yes" : "no") << " |\n";
  os << "| degenerate phase | " << (fit.degenerate_phase ? "yes" : "no") << " |\n";
  os << "| residual P(U+,R+,T+) measured - model | " << cell(fit.residual_tru_third_step) << " |\n";
  if (!fit.notes.empty()) {
    os << "\n";
    for (const auto& n : fit.notes) os << "- " << n << "\n";
  }
  return os.str();
}

std::string render_report(const std::vector<SequentialProbabilities>& queries, Format fmt) {
  const auto analyses = analyse(queries);

  std::vector<LtpRow> ltp_rows;
  std::vector<std::string> ltp_errors;
  for (const auto& a : analyses) {
    if (!a.fit) continue;
    try {
      ltp_rows.push_back({a.agg->query_id, ltp_report(*a.agg, a.fit->model)});
    } catch (const Error& e) {
      ltp_errors.push_back(a.agg->query_id + ": " + e.what());
    }
  }

  if (fmt == Format::Json) {
    ordered_json out;
    ordered_json qs = ordered_json::array();
    for (const auto& a : analyses) {
      ordered_json q;
      q["query_id"] = a.agg->query_id;
      ordered_json params;
      for (const auto& row : kParamRows) params[row.label] = num4(row.get(a));
      if (a.fit) {
        params["theta_r_deg"] = round2(to_degrees(a.fit->model.params().theta_r()));
        params["feasible"] = a.fit->feasible;
        params["degenerate_phase"] = a.fit->degenerate_phase;
      } else {
        params["error"] = a.fit_error;
      }
      q["parameters"] = params;
      const EffectTables et = effect_tables(*a.agg);
      q["effects"] = {
          {"reliability",
           {effect_cell_json(et.reliability.baseline), effect_cell_json(et.reliability.given_positive),
            effect_cell_json(et.reliability.given_negative)}},
          {"understandability",
           {effect_cell_json(et.understandability.baseline), effect_cell_json(et.understandability.given_positive),
            effect_cell_json(et.understandability.given_negative)}},
      };
      for (const auto& l : ltp_rows) {
        if (l.query_id == a.agg->query_id) q["ltp"] = ltp_json(l.query_id, l.report);
      }
      if (a.fit) {
        const double t = a.fit->model.params().t();
        q["wigner"] = wigner_json(wigner(t * t));
        ordered_json comm = ordered_json::array();
        for (const auto& c : commutator_report(a.fit->model)) {
          comm.push_back({{"pair", commutator_name(c)}, {"frobenius_norm", round4(c.frobenius_norm)},
                          {"commutes", c.commutes}});
        }
        q["commutators"] = comm;
      }
      qs.push_back(q);
    }
    out["queries"] = qs;
    return dump(out);
  }

  std::ostringstream os;
  os << "# Relevance judgment model report\n\n";

  os << "## Parameter values and associated probabilities\n\n| Quantity |";
  for (const auto& a : analyses) os << " " << a.agg->query_id << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < analyses.size(); ++i) os << "---|";
  os << "\n";
  for (const auto& row : kParamRows) {
    os << "| " << row.label << " |";
    for (const auto& a : analyses) os << " " << cell(row.get(a)) << " |";
    os << "\n";
  }
  os << "| theta_r (deg) |";
  for (const auto& a : analyses) os << " " << theta_cell(a) << " |";
  os << "\n\n";
  for (const auto& a : analyses) {
    if (!a.fit) os << "- " << a.agg->query_id << ": " << a.fit_error << "\n";
  }

  auto effect_section = [&](const char* title, auto pick) {
    os << "## " << title << "\n\n| Conditional |";
    for (const auto& a : analyses) os << " " << a.agg->query_id << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < analyses.size(); ++i) os << "---|";
    os << "\n";
    std::vector<EffectTables> tables;
    for (const auto& a : analyses) tables.push_back(effect_tables(*a.agg));
    for (int row = 0; row < 3; ++row) {
      const EffectTable& first = pick(tables.front());
      const EffectCell& label_cell = row == 0 ? first.baseline : row == 1 ? first.given_positive : first.given_negative;
      os << "| " << escape_md(label_cell.label) << " |";
      for (const auto& t : tables) {
        const EffectTable& et = pick(t);
        const EffectCell& c = row == 0 ? et.baseline : row == 1 ? et.given_positive : et.given_negative;
        os << " " << effect_cell_md(c) << " |";
      }
      os << "\n";
    }
    os << "\nValues marked \\* differ from the first row (chi-square, alpha = 0.05). Marks need raw counts.\n\n";
  };
  if (!analyses.empty()) {
    effect_section("Effect of Understandability on Reliability",
                   [](const EffectTables& t) -> const EffectTable& { return t.reliability; });
    effect_section("Effect of Reliability on Understandability",
                   [](const EffectTables& t) -> const EffectTable& { return t.understandability; });
  }

  os << "## Interference as violation of the law of total probability\n\n";
  ltp_md_table(os, ltp_rows);
  for (const auto& e : ltp_errors) os << "- " << e << "\n";
  os << "\n";

  os << "## Wigner functions\n\n";
  for (const auto& a : analyses) {
    if (!a.fit) continue;
    const double t = a.fit->model.params().t();
    wigner_md(os, a.agg->query_id, t * t);
  }

  os << "## Commutator norms (Frobenius)\n\n| Query | [T,U] | [T,R] | [R,U] |\n|---|---|---|---|\n";
  for (const auto& a : analyses) {
    if (!a.fit) continue;
    os << "| " << a.agg->query_id << " |";
    for (const auto& c : commutator_report(a.fit->model)) os << " " << fixed(c.frobenius_norm) << " |";
    os << "\n";
  }
  return os.str();
}

std::string render_wigner(const std::vector<std::pair<std::string, double>>& states, Format fmt) {
  if (fmt == Format::Json) {
    ordered_json out = ordered_json::array();
    for (const auto& [label, t2] : states) {
      ordered_json j = wigner_json(wigner(t2));
      j["label"] = label;
      j["t_squared"] = round4(t2);
      out.push_back(j);
    }
    return dump(out);
  }
  std::ostringstream os;
  os << "## Discrete Wigner functions\n\n";
  for (const auto& [label, t2] : states) wigner_md(os, label, t2);
  return os.str();
}

std::string render_operators(const QueryModel& model, Format fmt) {
  const auto& p = model.params();
  const Dimension dims[] = {Dimension::Topicality, Dimension::Understandability, Dimension::Reliability};
  const auto comms = commutator_report(model);
  if (fmt == Format::Json) {
    ordered_json j;
    j["query_id"] = model.query_id();
    ordered_json ops;
    for (Dimension d : dims) ops[std::string(1, dimension_letter(d))] = matrix_json(observable(p, d).matrix());
    j["observables"] = ops;
    ordered_json cs = ordered_json::array();
    for (const auto& c : comms) {
      cs.push_back({{"pair", commutator_name(c)}, {"matrix", matrix_json(c.value)},
                    {"frobenius_norm", round4(c.frobenius_norm)}, {"commutes", c.commutes}});
    }
    j["commutators"] = cs;
    return dump(j);
  }
  std::ostringstream os;
  os << "## Observables: " << model.query_id() << "\n\n";
  for (Dimension d : dims) {
    os << "### " << to_string(d) << "\n\n";
    md_matrix(os, observable(p, d).matrix(), d == Dimension::Reliability ? polar_entry : matrix_entry);
    os << "\n";
  }
  os << "### Commutators\n\n| Pair | Frobenius norm | commutes |\n|---|---|---|\n";
  for (const auto& c : comms) {
    os << "| " << commutator_name(c) << " | " << fixed(c.frobenius_norm) << " | " << (c.commutes ? "yes" : "no")
       << " |\n";
  }
  return os.str();
}

std::string render_ltp(const std::vector<LtpRow>& rows, Format fmt) {
  if (fmt == Format::Json) {
    ordered_json out = ordered_json::array();
    for (const auto& r : rows) out.push_back(ltp_json(r.query_id, r.report));
    return dump(out);
  }
  std::ostringstream os;
  os << "## Interference as violation of the law of total probability\n\n";
  ltp_md_table(os, rows);
  return os.str();
}

std::string render_simulation_summary(const ResponseDataset& data, const QueryModel& model, Format fmt) {
  // Tiny samples can leave one order group empty; those cells print as n/a.
  SequentialProbabilities agg;
  std::uint64_t n_tur = 0, n_tru = 0;
  try {
    agg = aggregate(data, model.query_id());
    n_tur = agg.p_t_pos_tur->counts->n;
    n_tru = agg.p_t_pos_tru->counts->n;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyGroup) throw;
    agg = SequentialProbabilities{};
    for (const auto& r : data.records()) {
      if (r.query_id != model.query_id()) continue;
      ++(r.sequence == SequenceOrder::TUR ? n_tur : n_tru);
    }
  }
  using J = Judgment;
  constexpr auto T = Dimension::Topicality;
  constexpr auto U = Dimension::Understandability;
  constexpr auto R = Dimension::Reliability;
  constexpr auto P = Outcome::Positive;
  constexpr auto N = Outcome::Negative;
  const J t_only[] = {{T, P}};
  const J ut[] = {{T, P}, {U, P}};
  const J rt[] = {{T, P}, {R, P}};
  const J rut[] = {{T, P}, {U, P}, {R, P}};
  const J runt[] = {{T, P}, {U, N}, {R, P}};
  const J urt[] = {{T, P}, {R, P}, {U, P}};
  const J urnt[] = {{T, P}, {R, N}, {U, P}};
  struct Row {
    const char* label;
    std::optional<double> empirical;
    double model;
  };
  const Row rows[] = {
      {"P(T+)", value_of(agg.p_t_pos), predict_sequence_prob(model, t_only)},
      {"P(U+,T+)", agg.joint_u_pos_t_pos(), predict_sequence_prob(model, ut)},
      {"P(R+,T+)", agg.joint_r_pos_t_pos(), predict_sequence_prob(model, rt)},
      {"P(R+,U+,T+)", agg.joint_r_pos_u_pos_t_pos(), predict_sequence_prob(model, rut)},
      {"P(R+,U-,T+)", agg.joint_r_pos_u_neg_t_pos(), predict_sequence_prob(model, runt)},
      {"P(U+,R+,T+)", agg.joint_u_pos_r_pos_t_pos(), predict_sequence_prob(model, urt)},
      {"P(U+,R-,T+)", agg.joint_u_pos_r_neg_t_pos(), predict_sequence_prob(model, urnt)},
  };
  if (fmt == Format::Json) {
    ordered_json j;
    j["query_id"] = model.query_id();
    j["respondents"] = data.size();
    j["tur"] = n_tur;
    j["tru"] = n_tru;
    ordered_json rs = ordered_json::array();
    for (const auto& r : rows) rs.push_back({{"quantity", r.label}, {"empirical", num4(r.empirical)}, {"model", round4(r.model)}});
    j["probabilities"] = rs;
    return dump(j);
  }
  std::ostringstream os;
  os << "## Simulated " << data.size() << " respondents for " << model.query_id() << " (TUR " << n_tur << ", TRU "
     << n_tru << ")\n\n";
  os << "| Quantity | empirical | model |\n|---|---|---|\n";
  for (const auto& r : rows) os << "| " << r.label << " | " << cell(r.empirical) << " | " << fixed(r.model) << " |\n";
  return os.str();
}

std::string render_cascade(SternGerlachSetup setup, const CascadeSpec& spec, const std::vector<StageCounts>& counts,
                           Format fmt) {
  const char setup_name = setup == SternGerlachSetup::A ? 'a' : setup == SternGerlachSetup::B ? 'b' : 'c';
  auto blocked = [&](std::size_t s) -> std::string {
    const auto& b = spec.stages()[s].block;
    if (!b) return "none";
    return *b == Outcome::Positive ? "+" : "-";
  };
  if (fmt == Format::Json) {
    ordered_json j;
    j["setup"] = std::string(1, setup_name);
    j["shots"] = spec.shots();
    ordered_json st = ordered_json::array();
    for (std::size_t s = 0; s < counts.size(); ++s) {
      st.push_back({{"stage", s + 1}, {"axis", spec.stages()[s].label}, {"blocked", blocked(s)},
                    {"positive", counts[s].positive}, {"negative", counts[s].negative}, {"passed", counts[s].passed}});
    }
    j["stages"] = st;
    return dump(j);
  }
  std::ostringstream os;
  os << "## Stern-Gerlach setup (" << setup_name << "), " << spec.shots() << " shots\n\n";
  os << "| Stage | Axis | + | - | blocked | passed |\n|---|---|---|---|---|---|\n";
  for (std::size_t s = 0; s < counts.size(); ++s) {
    os << "| " << s + 1 << " | " << spec.stages()[s].label << " | " << counts[s].positive << " | " << counts[s].negative
       << " | " << blocked(s) << " | " << counts[s].passed << " |\n";
  }
  if (spec.shots() == 1) {
    os << "\nTrajectory:";
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s].positive + counts[s].negative == 0) break;
      os << (s == 0 ? " " : " -> ") << spec.stages()[s].label << (counts[s].positive ? "+" : "-");
      if (counts[s].passed == 0 && s + 1 < counts.size()) os << " (blocked)";
    }
    os << "\n";
  }
  return os.str();
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "theta_deg,interference,p_direct,p_ltp_sum\n";
  for (const auto& r : rows) {
    os << fixed(r.theta_deg, 2) << ',' << fixed(r.interference) << ',' << fixed(r.p_direct) << ','
       << fixed(r.p_ltp_sum) << '\n';
  }
  return os.str();
}

}  // namespace qrel
