#include "qrel/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "qrel/error.hpp"

namespace qrel {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string(b, e) : std::string();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

Answer parse_answer(const std::string& field, std::size_t line, const char* column) {
  const std::string v = lower(field);
  if (v == "yes") return true;
  if (v == "no") return false;
  if (v.empty() || v == "-") return std::nullopt;
  throw ParseError(line, std::string(column) + ": expected yes or no, got '" + field + "'");
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return in;
}

json parse_json(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string(what) + " is not valid JSON: " + e.what());
  }
}

double number_field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw Error(ErrorCode::Schema, std::string("missing field '") + name + "'");
  const json& v = doc.at(name);
  if (!v.is_number()) throw Error(ErrorCode::Schema, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

MaybeEstimate estimate_field(const json& doc, const std::string& name) {
  if (!doc.contains(name) || doc.at(name).is_null()) return std::nullopt;
  const json& v = doc.at(name);
  try {
    if (v.is_number()) return Estimate::exact(v.get<double>());
    if (v.is_object() && v.contains("k") && v.contains("n") && v.at("k").is_number_unsigned() &&
        v.at("n").is_number_unsigned()) {
      return Estimate::from_counts(v.at("k").get<std::uint64_t>(), v.at("n").get<std::uint64_t>());
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, "field '" + name + "': " + e.what());
  }
  throw Error(ErrorCode::Schema, "field '" + name + "' must be a probability or {\"k\": .., \"n\": ..}");
}

std::optional<double> ratio_of(std::optional<double> num, std::optional<double> den, const std::string& field) {
  if (!num || !den) return std::nullopt;
  if (*den <= 0.0) {
    if (*num == 0.0) return std::nullopt;
    throw Error(ErrorCode::Schema, "field '" + field + "' has a zero-probability conditioning event");
  }
  const double p = *num / *den;
  if (p > 1.0 + 1e-9) throw Error(ErrorCode::Schema, "field '" + field + "' exceeds its marginal");
  return std::min(p, 1.0);
}

std::optional<double> value_of(const MaybeEstimate& e) {
  if (!e) return std::nullopt;
  return e->p;
}

const std::vector<std::string>& known_probability_fields() {
  static const std::vector<std::string> fields = {
      "query_id",
      "p_t_pos",
      "p_t_pos_tur",
      "p_t_pos_tru",
      "p_u_pos_given_t_pos",
      "p_r_pos_given_t_pos",
      "p_r_pos_given_u_pos_t_pos",
      "p_r_pos_given_u_neg_t_pos",
      "p_u_pos_given_r_pos_t_pos",
      "p_u_pos_given_r_neg_t_pos",
      "p_u_pos_t_pos",
      "p_r_pos_t_pos",
      "p_r_pos_u_pos_t_pos",
      "p_r_pos_u_neg_t_pos",
      "p_u_pos_r_pos_t_pos",
      "p_u_pos_r_neg_t_pos",
  };
  return fields;
}

SequentialProbabilities probabilities_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "probability entry must be an object");
  const auto& known = known_probability_fields();
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::Schema, "unknown field '" + key + "'");
    }
  }
  if (!doc.contains("query_id") || !doc.at("query_id").is_string() || doc.at("query_id").get<std::string>().empty()) {
    throw Error(ErrorCode::Schema, "field 'query_id' must be a non-empty string");
  }

  SequentialProbabilities s;
  s.query_id = doc.at("query_id").get<std::string>();
  s.p_t_pos = estimate_field(doc, "p_t_pos");
  s.p_t_pos_tur = estimate_field(doc, "p_t_pos_tur");
  s.p_t_pos_tru = estimate_field(doc, "p_t_pos_tru");
  s.p_u_pos_given_t_pos = estimate_field(doc, "p_u_pos_given_t_pos");
  s.p_r_pos_given_t_pos = estimate_field(doc, "p_r_pos_given_t_pos");
  s.p_r_pos_given_u_pos_t_pos = estimate_field(doc, "p_r_pos_given_u_pos_t_pos");
  s.p_r_pos_given_u_neg_t_pos = estimate_field(doc, "p_r_pos_given_u_neg_t_pos");
  s.p_u_pos_given_r_pos_t_pos = estimate_field(doc, "p_u_pos_given_r_pos_t_pos");
  s.p_u_pos_given_r_neg_t_pos = estimate_field(doc, "p_u_pos_given_r_neg_t_pos");

  auto joint = [&](const char* name) { return value_of(estimate_field(doc, name)); };
  const auto j_ut = joint("p_u_pos_t_pos");
  const auto j_rt = joint("p_r_pos_t_pos");
  const auto j_rut = joint("p_r_pos_u_pos_t_pos");
  const auto j_runt = joint("p_r_pos_u_neg_t_pos");
  const auto j_urt = joint("p_u_pos_r_pos_t_pos");
  const auto j_urnt = joint("p_u_pos_r_neg_t_pos");

  auto fill = [](MaybeEstimate& target, std::optional<double> p) {
    if (!target && p) target = Estimate::exact(*p);
  };

  if (!s.p_t_pos) s.p_t_pos = s.p_t_pos_tur;
  // The TRU group's P(T+) follows from P(R+,T+) and P(R+|T+) when both are given.
  if (!s.p_t_pos_tru && s.p_r_pos_given_t_pos && j_rt) {
    fill(s.p_t_pos_tru, ratio_of(j_rt, value_of(s.p_r_pos_given_t_pos), "p_r_pos_t_pos"));
  }
  const auto t_tur = s.t_pos_tur();
  const auto t_tru = s.t_pos_tru();

  fill(s.p_u_pos_given_t_pos, ratio_of(j_ut, t_tur, "p_u_pos_t_pos"));
  fill(s.p_r_pos_given_t_pos, ratio_of(j_rt, t_tru, "p_r_pos_t_pos"));
  const auto ut = s.joint_u_pos_t_pos();
  const auto rt = s.joint_r_pos_t_pos();
  fill(s.p_r_pos_given_u_pos_t_pos, ratio_of(j_rut, ut, "p_r_pos_u_pos_t_pos"));
  if (t_tur && ut) fill(s.p_r_pos_given_u_neg_t_pos, ratio_of(j_runt, *t_tur - *ut, "p_r_pos_u_neg_t_pos"));
  fill(s.p_u_pos_given_r_pos_t_pos, ratio_of(j_urt, rt, "p_u_pos_r_pos_t_pos"));
  if (t_tru && rt) fill(s.p_u_pos_given_r_neg_t_pos, ratio_of(j_urnt, *t_tru - *rt, "p_u_pos_r_neg_t_pos"));

  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what());
  }
  return s;
}

}  // namespace

ResponseDataset read_responses(std::istream& in) {
  ResponseDataset data;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      std::string header;
      for (const auto& f : split_fields(line)) header += (header.empty() ? "" : ",") + lower(f);
      if (header != kResponseCsvHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kResponseCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.find('"') != std::string::npos) throw ParseError(line_no, "quoted fields are not supported");
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw ParseError(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
    }
    ResponseRecord rec;
    rec.respondent_id = fields[0];
    rec.query_id = fields[1];
    const auto seq = parse_sequence_order(upper(fields[2]));
    if (!seq) throw ParseError(ErrorCode::UnknownSequenceTag, line_no, "unknown sequence tag '" + fields[2] + "'");
    rec.sequence = *seq;
    rec.answers[0] = parse_answer(fields[3], line_no, "answer1");
    rec.answers[1] = parse_answer(fields[4], line_no, "answer2");
    rec.answers[2] = parse_answer(fields[5], line_no, "answer3");
    try {
      data.add(std::move(rec));
    } catch (const Error& e) {
      const ErrorCode code = e.code() == ErrorCode::DuplicateRespondent ? e.code() : ErrorCode::Parse;
      throw ParseError(code, line_no, e.what());
    }
  }
  if (!header_seen) throw ParseError(1, "missing header");
  return data;
}

ResponseDataset load_responses(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_responses(in);
}

void write_responses(std::ostream& out, const ResponseDataset& data) {
  out << kResponseCsvHeader << '\n';
  auto answer = [](const Answer& a) -> std::string_view {
    if (!a) return "";
    return *a ? "yes" : "no";
  };
  for (const auto& r : data.records()) {
    out << r.respondent_id << ',' << r.query_id << ',' << to_string(r.sequence) << ',' << answer(r.answers[0]) << ','
        << answer(r.answers[1]) << ',' << answer(r.answers[2]) << '\n';
  }
}

void save_responses(const std::filesystem::path& path, const ResponseDataset& data) {
  std::ostringstream os;
  write_responses(os, data);
  write_text(path, os.str());
}

QueryModel read_model(std::istream& in) {
  const json doc = parse_json(in, "model document");
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "model document must be a JSON object");
  if (!doc.contains("query_id") || !doc.at("query_id").is_string()) {
    throw Error(ErrorCode::Schema, "missing field 'query_id'");
  }
  const double t = number_field(doc, "t");
  const double u = number_field(doc, "u");
  const double r = number_field(doc, "r");
  const double theta_deg = number_field(doc, "theta_r_deg");
  std::string provenance;
  if (doc.contains("provenance")) {
    if (!doc.at("provenance").is_string()) throw Error(ErrorCode::Schema, "field 'provenance' must be a string");
    provenance = doc.at("provenance").get<std::string>();
  }
  try {
    return QueryModel(doc.at("query_id").get<std::string>(), RelevanceParams(t, u, r, to_radians(theta_deg)),
                      provenance);
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what());
  }
}

QueryModel load_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_model(in);
}

std::string model_to_json(const QueryModel& model) {
  json doc = json::object();
  doc["query_id"] = model.query_id();
  doc["t"] = model.params().t();
  doc["u"] = model.params().u();
  doc["r"] = model.params().r();
  doc["theta_r_deg"] = to_degrees(model.params().theta_r());
  if (!model.provenance().empty()) doc["provenance"] = model.provenance();
  return doc.dump(2) + "\n";
}

void save_model(const std::filesystem::path& path, const QueryModel& model) { write_text(path, model_to_json(model)); }

std::vector<SequentialProbabilities> read_probabilities(std::istream& in) {
  const json doc = parse_json(in, "probability document");
  const json* entries = &doc;
  if (doc.is_object() && doc.contains("queries")) entries = &doc.at("queries");
  std::vector<SequentialProbabilities> out;
  if (entries->is_array()) {
    for (const auto& e : *entries) out.push_back(probabilities_from_json(e));
  } else {
    out.push_back(probabilities_from_json(*entries));
  }
  return out;
}

std::vector<SequentialProbabilities> load_probabilities(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_probabilities(in);
}

std::vector<SequentialProbabilities> load_probability_source(const std::filesystem::path& path) {
  auto in = open_in(path);
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  in.clear();
  in.seekg(0);
  if (c == '{' || c == '[') return read_probabilities(in);
  const ResponseDataset data = read_responses(in);
  std::vector<SequentialProbabilities> out;
  for (const auto& q : data.query_ids()) out.push_back(aggregate(data, q));
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

}  // namespace qrel
