#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>

namespace {

using namespace ternalg;
using namespace ternalg::cli;

struct Global {
  Options opt;
  std::string format = "json";
  std::string report_path;
};

int emit(const RunReport& r, const Global& g, bool out_is_report) {
  const std::string json_text = io::dump(r.to_json());
  if (out_is_report && !g.opt.out.empty()) io::write_document(g.opt.out, r.to_json());
  if (!g.report_path.empty()) io::write_document(g.report_path, r.to_json());
  std::cout << (g.format == "text" ? r.to_text() : json_text);
  return r.exit_code();
}

int run_timed(const std::function<RunReport()>& body, const Global& g, bool out_is_report) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return emit(r, g, out_is_report);
}

Params parse_sets(const std::vector<std::string>& sets) {
  Params p;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--set expects key=value, got '" + s + "'");
    p[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ternalg: ternary para-associative algebras and algebroids"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--eps", g.opt.eps, "numerical tolerance")->capture_default_str();
  app.add_option("--dt", g.opt.dt, "transport step size")->capture_default_str();
  app.add_option("--out", g.opt.out, "output path (constructed artifact, or the report for checks)");
  app.add_option("--report", g.report_path, "also write the JSON report to this path");
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  std::function<int()> action;

  auto* algebra = app.add_subcommand("algebra", "finite-dimensional ternary algebras")->require_subcommand(1);
  algebra->fallthrough();

  std::string algebra_path;
  auto* check = algebra->add_subcommand("check", "para-associativity and related properties");
  check->add_option("file", algebra_path, "algebra document")->required();
  check->fallthrough();
  check->callback([&] { action = [&] { return run_timed([&] { return algebra_check(algebra_path, g.opt); }, g, true); }; });

  std::string kind;
  std::vector<std::string> inputs, sets;
  auto* construct = algebra->add_subcommand("construct", "build algebras, fields, connections and curves");
  construct->add_option("--kind", kind, "construction")->required();
  construct->add_option("--input", inputs, "input documents, in order");
  construct->add_option("--set", sets, "parameter key=value");
  construct->fallthrough();
  construct->callback([&] {
    action = [&] {
      const Params params = parse_sets(sets);
      return run_timed([&] { return algebra_construct(kind, inputs, params, g.opt); }, g, false);
    };
  });

  std::string e_text;
  auto* reduce = algebra->add_subcommand("reduce", "binary reduction along a vector");
  reduce->add_option("file", algebra_path, "algebra document")->required();
  reduce->add_option("--e", e_text, "comma-separated coordinates")->required();
  reduce->fallthrough();
  reduce->callback([&] {
    action = [&] { return run_timed([&] { return algebra_reduce(algebra_path, e_text, g.opt); }, g, false); };
  });

  std::string field_path, connection_path, metric_path, curve_path;
  auto* field = app.add_subcommand("field", "structure fields")->require_subcommand(1);
  field->fallthrough();
  auto* fcheck = field->add_subcommand("check", "pointwise para-associativity");
  fcheck->add_option("file", field_path, "structure or metric field")->required();
  fcheck->fallthrough();
  fcheck->callback([&] { action = [&] { return run_timed([&] { return field_check(field_path, g.opt); }, g, true); }; });

  auto* connection = app.add_subcommand("connection", "connections on a field")->require_subcommand(1);
  connection->fallthrough();
  auto* ccheck = connection->add_subcommand("check", "differential, metric and curvature residuals");
  ccheck->add_option("--field", field_path, "structure or metric field")->required();
  ccheck->add_option("--connection", connection_path, "connection field")->required();
  ccheck->add_option("--metric", metric_path, "metric for the compatibility check");
  ccheck->fallthrough();
  ccheck->callback([&] {
    action = [&] {
      return run_timed([&] { return connection_check(field_path, connection_path, metric_path, g.opt); }, g, true);
    };
  });

  auto* transport = app.add_subcommand("transport", "parallel transport")->require_subcommand(1);
  transport->fallthrough();
  auto* trun = transport->add_subcommand("run", "transport along a curve and test the isomorphism property");
  trun->add_option("--field", field_path, "structure or metric field")->required();
  trun->add_option("--connection", connection_path, "connection field")->required();
  trun->add_option("--curve", curve_path, "curve document")->required();
  trun->fallthrough();
  trun->callback([&] {
    action = [&] {
      return run_timed([&] { return transport_run(field_path, connection_path, curve_path, g.opt); }, g, true);
    };
  });

  std::string lhs, rhs;
  auto* report = app.add_subcommand("report", "report utilities")->require_subcommand(1);
  report->fallthrough();
  auto* diff = report->add_subcommand("diff", "compare two reports ignoring timing");
  diff->add_option("a", lhs, "first report")->required();
  diff->add_option("b", rhs, "second report")->required();
  diff->fallthrough();
  diff->callback([&] {
    action = [&] {
      const auto paths = report_diff(io::read_document(lhs), io::read_document(rhs));
      if (g.format == "text") {
        std::cout << (paths.empty() ? "identical (timing ignored)\n" : "reports differ:\n");
        for (const auto& p : paths) std::cout << "  " << p << "\n";
      } else {
        std::cout << io::dump(json{{"identical", paths.empty()}, {"differences", paths}});
      }
      return paths.empty() ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const ternalg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
