#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "permot/albanese/curve.hpp"

namespace permot::session {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Raised for malformed or invalid documents; every entry carries a JSON
// pointer to the offending location.
struct SchemaIssue {
  std::string location;
  std::string message;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

struct Query {
  std::string command;
  std::vector<std::string> args;
  Json options = Json::object();
};

// A parsed, validated document.  `source` keeps the canonical JSON form the
// typed data was built from, so emitting and re-parsing is lossless.
struct Document {
  Json source;
  RegistryPtr registry;
  std::map<std::string, OneMotive> motives;
  std::map<std::string, PeriodTriple> triples;
  std::map<std::string, CurveModel> curves;
  std::vector<Query> queries;
};

Document parse_session(const std::string& text);
Document parse_session(const Json& doc);

// Canonical JSON form of the document (stable key order, normalized
// numbers and expressions).
Json emit_session(const Document& doc);

struct QueryResult {
  std::size_t index = 0;
  std::string command;
  std::vector<std::string> args;
  std::string tag;
  Json result;
  std::string error;  // non-empty when the computation failed
};

struct RunOptions {
  long bound_override = 0;  // > 0 replaces every curve's relation_bound
  int default_twist = 1;
  unsigned jobs = 1;
};

QueryResult run_query(const Document& doc, const Query& q, std::size_t index, const RunOptions& options = {});
std::vector<QueryResult> run_session(const Document& doc, const RunOptions& options = {});

Json results_to_json(const std::vector<QueryResult>& results);
std::string results_to_table(const std::vector<QueryResult>& results);

// Shared JSON encodings.
Json triple_to_json(const PeriodTriple& h);
Json lattice_to_json(const Lattice& l);

}  // namespace permot::session
