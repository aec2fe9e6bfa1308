#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "permot/session/session.hpp"

using namespace permot;
using namespace permot::session;

namespace {

constexpr int kSchemaFailure = 1;
constexpr int kComputationFailure = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError({{"", "cannot read '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  std::string session;
  std::string format = "table";
  long bound = 0;
  int twist = 1;
  unsigned jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("session", c.session, "Session document (JSON)")->required();
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app->add_option("--bound", c.bound, "Override every curve's relation bound")->check(CLI::PositiveNumber);
  app->add_option("--twist", c.twist, "Default Tate twist for 'twist'");
  app->add_option("--jobs", c.jobs, "Run independent queries concurrently")->check(CLI::Range(1u, 64u));
}

int emit(const std::vector<QueryResult>& results, const std::string& format) {
  if (format == "json")
    std::cout << results_to_json(results).dump(2) << "\n";
  else
    std::cout << results_to_table(results);
  bool failed = false;
  for (const auto& r : results)
    if (!r.error.empty()) {
      std::cerr << r.error << "\n";
      failed = true;
    }
  return failed ? kComputationFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact period computations for 1-motives and period triples"};
  app.require_subcommand(1);

  Common common;
  CLI::App* run = app.add_subcommand("run", "Run every query of a session document");
  add_common(run, common);

  CLI::App* check = app.add_subcommand("validate", "Validate a session and print its canonical form");
  check->add_option("session", common.session, "Session document (JSON)")->required();

  struct Direct {
    const char* name;
    const char* help;
    std::size_t arity;
  };
  const std::vector<Direct> direct = {
      {"realize", "Betti-de Rham realization of a motive", 1},
      {"hom", "Hom lattice between two objects", 2},
      {"dual", "Dual triple", 1},
      {"cartier", "Cartier dual, with an isomorphism check for torus-lattice motives", 1},
      {"tensor", "Tensor product of two objects", 2},
      {"twist", "Tate twist by --twist", 1},
      {"hphi", "Period cohomology Hom(Z(0), H)", 1},
      {"keru", "Kernel of u for a motive", 1},
      {"biext", "Biextension lattice of two objects", 2},
      {"albanese", "Albanese motive of a punctured curve", 1},
      {"report", "Predicted ranks of period cohomology of a punctured curve", 1},
      {"fullnesscheck", "Compare motive Hom with triple Hom", 2},
  };
  std::vector<std::string> args;
  std::string side = "bdr";
  int q_min = -1, q_max = 2;
  std::vector<CLI::App*> subs;
  for (const auto& d : direct) {
    CLI::App* sub = app.add_subcommand(d.name, d.help);
    add_common(sub, common);
    sub->add_option("objects", args, "Object names")->expected(static_cast<int>(d.arity))->required();
    if (std::string(d.name) == "realize")
      sub->add_option("--side", side, "bdr or drb")->check(CLI::IsMember({"bdr", "drb"}));
    if (std::string(d.name) == "report") {
      sub->add_option("--q-min", q_min, "First q");
      sub->add_option("--q-max", q_max, "Last q");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kSchemaFailure;
  }

  Document doc;
  try {
    doc = parse_session(read_file(common.session));
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kSchemaFailure;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kSchemaFailure;
  }

  if (check->parsed()) {
    std::cout << emit_session(doc).dump(2) << "\n";
    return 0;
  }
  const RunOptions opts{common.bound, common.twist, common.jobs};
  if (run->parsed()) return emit(run_session(doc, opts), common.format);

  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    // Reuse the session validator for argument checks.
    Json source = emit_session(doc);
    Json query = {{"command", sub->get_name()}, {"args", args}, {"options", Json::object()}};
    if (sub->get_name() == "realize") query["options"]["side"] = side;
    if (sub->get_name() == "report") {
      query["options"]["q_min"] = q_min;
      query["options"]["q_max"] = q_max;
    }
    source["queries"] = Json::array({query});
    try {
      doc = parse_session(source);
    } catch (const SchemaError& e) {
      std::cerr << e.what() << "\n";
      return kSchemaFailure;
    }
    return emit(run_session(doc, opts), common.format);
  }
  return 0;
}
