#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

const char* kWs = R"(field Q
ring X vars x trunc 5
ring Y vars y trunc 5
map f : X -> Y [ x^2 ]
map ft : X -> Y [ x^2 + x^3 ]
map g : X -> Y [ x^3 ]
quiver loop { vertex a ring X; edge a -> a map f }
)";

struct Run {
  int code;
  nlohmann::json report;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = kWs) {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = germforge::cli::run(args, in, out, err);
  nlohmann::json j;
  if (!out.str().empty() && out.str()[0] == '{') j = nlohmann::json::parse(out.str());
  return {code, j, err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(germforge::cli::exit_code("success") == 0);
  CHECK(germforge::cli::exit_code("obstructed") == 10);
  CHECK(germforge::cli::exit_code("mismatch") == 10);
  CHECK(germforge::cli::exit_code("seed-required") == 11);
  CHECK(germforge::cli::exit_code("input-error") == 2);
  CHECK(germforge::cli::exit_code("unsupported") == 12);
}

TEST_CASE("cli solve and obstruction") {
  auto r = run({"solve", "-", "--group", "R", "--lhs", "ft", "--rhs", "f", "--degree", "5"});
  CHECK(r.code == 0);
  CHECK(r.report["schema"] == "germforge-report/1");
  CHECK(r.report["command"] == "solve");
  CHECK(r.report["witness"]["phi_x"][0] == "x + 1/2 x^2 - 1/8 x^3");

  r = run({"solve", "-", "--group", "K", "--lhs", "g", "--rhs", "f", "--degree", "3"});
  CHECK(r.code == 10);
  CHECK(r.report["verdict"] == "obstructed");
  CHECK(r.report["order"] == 2);
}

TEST_CASE("cli verify round trip") {
  auto r = run({"solve", "-", "--group", "R", "--lhs", "ft", "--rhs", "f", "--degree", "5"});
  std::string ws = std::string(kWs) + r.report["witness"]["element"].get<std::string>() + "\n";
  auto v = run({"verify", "-", "--lhs", "ft", "--rhs", "f", "--element", "witness", "--degree", "5"}, ws);
  CHECK(v.code == 0);
  v = run({"verify", "-", "--lhs", "g", "--rhs", "f", "--element", "witness", "--degree", "5"}, ws);
  CHECK(v.code == 10);
  CHECK(v.report["verdict"] == "mismatch");
}

TEST_CASE("cli input errors") {
  auto r = run({"print", "-"}, "ring X vars x trunc 3\n");
  CHECK(r.code == 2);
  CHECK(r.report["verdict"] == "input-error");
  CHECK(r.report["line"] == 1);

  r = run({"solve", "-", "--group", "R", "--lhs", "nope", "--rhs", "f", "--degree", "5"});
  CHECK(r.code == 2);

  r = run({"quiver", "validate", "-", "--quiver", "loop"});
  CHECK(r.code == 2);
  CHECK(r.report["verdict"] == "invalid");
}

TEST_CASE("cli print is stable") {
  auto a = run({"print", "-"});
  std::istringstream in(kWs);
  std::ostringstream o1, o2, e;
  germforge::cli::run({"print", "-"}, in, o1, e);
  std::istringstream in2(o1.str());
  germforge::cli::run({"print", "-"}, in2, o2, e);
  CHECK(a.code == 0);
  CHECK(o1.str() == o2.str());
}
