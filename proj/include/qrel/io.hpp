#pragma once

// File formats.
//
// Response CSV:
//   respondent_id,query_id,sequence,answer1,answer2,answer3
//   p1,q1,TUR,yes,yes,no
// sequence is TUR or TRU; answers are yes/no (case-insensitive), answers in
// asked order. answer2/answer3 may be blank after "no" on answer1.
//
// Model document (JSON): query_id, t, u, r, theta_r_deg, optional provenance.
//
// Probability document (JSON): one object per query, either alone, in an
// array, or under "queries". Fields: query_id plus any of
//   p_t_pos, p_t_pos_tur, p_t_pos_tru,
//   p_u_pos_given_t_pos, p_r_pos_given_t_pos, p_r_pos_given_u_pos_t_pos,
//   p_r_pos_given_u_neg_t_pos, p_u_pos_given_r_pos_t_pos, p_u_pos_given_r_neg_t_pos,
// each a number or {"k": successes, "n": trials}, and the joint forms
//   p_u_pos_t_pos, p_r_pos_t_pos, p_r_pos_u_pos_t_pos, p_r_pos_u_neg_t_pos,
//   p_u_pos_r_pos_t_pos, p_u_pos_r_neg_t_pos
// which are turned into conditionals when the conditional itself is absent.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qrel/cognitive_model.hpp"
#include "qrel/estimation.hpp"

namespace qrel {

inline constexpr std::string_view kResponseCsvHeader = "respondent_id,query_id,sequence,answer1,answer2,answer3";

ResponseDataset read_responses(std::istream& in);
ResponseDataset load_responses(const std::filesystem::path& path);
void write_responses(std::ostream& out, const ResponseDataset& data);
void save_responses(const std::filesystem::path& path, const ResponseDataset& data);

QueryModel read_model(std::istream& in);
QueryModel load_model(const std::filesystem::path& path);
std::string model_to_json(const QueryModel& model);
void save_model(const std::filesystem::path& path, const QueryModel& model);

std::vector<SequentialProbabilities> read_probabilities(std::istream& in);
std::vector<SequentialProbabilities> load_probabilities(const std::filesystem::path& path);

// Aggregated probabilities for every query of either a response CSV or a
// probability document, detected from the first non-blank character.
std::vector<SequentialProbabilities> load_probability_source(const std::filesystem::path& path);

// Writes text to a file, throwing IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace qrel
