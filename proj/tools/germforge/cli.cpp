#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "germforge/errors.hpp"
#include "germforge/workspace.hpp"

namespace germforge::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "germforge-report/1";

struct InputError : Error {
  using Error::Error;
};

int max_degree() {
  if (const char* s = std::getenv("GERMFORGE_MAX_DEGREE")) {
    try {
      int v = std::stoi(s);
      if (v > 0) return v;
    } catch (const std::logic_error&) {
    }
    throw InputError("GERMFORGE_MAX_DEGREE must be a positive integer");
  }
  return 32;
}

void check_degree(int d) {
  if (d > max_degree())
    throw InputError("degree " + std::to_string(d) + " exceeds GERMFORGE_MAX_DEGREE");
}

Workspace load(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    std::ostringstream s;
    s << in.rdbuf();
    text = s.str();
  } else {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open workspace '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    text = s.str();
  }
  Workspace ws = parse_workspace(text);
  for (const auto& [name, r] : ws.rings)
    if (r->trunc() > max_degree())
      throw InputError("ring " + name + " truncation exceeds GERMFORGE_MAX_DEGREE");
  return ws;
}

json strings(const std::vector<Jet>& js) {
  json a = json::array();
  for (const auto& j : js) a.push_back(j.to_string());
  return a;
}

json free_strings(const RingPtr& target, const std::vector<Jet>& images) {
  json a = json::array();
  for (auto i : target->free_vars()) a.push_back(images.at(i).to_string());
  return a;
}

json terms(const Jet& j) {
  json a = json::array();
  for (const auto& [m, c] : j.terms())
    a.push_back({{"monomial", monomial_to_string(*j.vars(), m)}, {"coefficient", c.to_string()}});
  return a;
}

/// Every coefficient of degree 1..d-1 over the free variables, zeros included.
json dense(const Jet& j, const std::vector<std::size_t>& vars, int d) {
  json a = json::array();
  for (int k = 1; k < d; ++k)
    for (const auto& m : monomials_of_degree(vars.size(), k)) {
      std::vector<int> e(j.vars()->size(), 0);
      for (std::size_t i = 0; i < vars.size(); ++i) e[vars[i]] = m.exponent(i);
      Monomial full = Monomial::from_exponents(e);
      a.push_back({{"monomial", monomial_to_string(*j.vars(), full)},
                   {"coefficient", j.coefficient(full).to_string()}});
    }
  return a;
}

json residual(const std::vector<ResidualPart>& parts) {
  json a = json::array();
  for (const auto& p : parts) a.push_back({{"label", p.label}, {"terms", terms(p.residual)}});
  return a;
}

json log_json(const std::vector<StageLog>& log) {
  json a = json::array();
  for (const auto& s : log)
    a.push_back({{"order", s.order},
                 {"unknowns", s.unknowns},
                 {"equations", s.equations},
                 {"rank", s.rank},
                 {"method", s.method}});
  return a;
}

json header(const std::string& command, const std::string& verdict) {
  return {{"schema", kSchema}, {"command", command}, {"verdict", verdict}};
}

Constraint constraint_arg(const std::string& text) {
  auto sp = text.find_first_of(" \t");
  if (sp == std::string::npos) throw InputError("constraint needs '<X|Y> <variant> [args]'");
  return parse_constraint(text.substr(0, sp), text.substr(sp + 1));
}

json solve_json(const SolveReport& r, const GermMap& f) {
  json j = header("solve", to_string(r.verdict));
  j["group"] = to_string(r.group);
  j["degree"] = r.degree;
  if (r.witness) {
    const GroupElement& g = *r.witness;
    json w;
    w["phi_x"] = free_strings(f.source, r.phi_x);
    w["phi_y"] = free_strings(f.target, r.phi_y);
    if (!r.contact.empty()) w["contact"] = strings(r.contact);
    json coeffs = json::array();
    for (auto i : f.source->free_vars()) coeffs.push_back(dense(r.phi_x[i], f.source->free_vars(), r.degree));
    w["coefficients"] = coeffs;
    w["element"] = print_element("witness", {f.source->name(), f.target->name(), g});
    j["witness"] = w;
  } else {
    j["order"] = r.order;
    j["residual"] = residual(r.residual);
    j["branch_qualified"] = r.branch_qualified;
  }
  if (!r.message.empty()) j["message"] = r.message;
  j["log"] = log_json(r.log);
  return j;
}

std::map<std::string, std::vector<Jet>> free_phi(const QuiverProblem& p,
                                                const std::map<std::string, std::vector<Jet>>& phi) {
  std::map<std::string, std::vector<Jet>> out;
  for (const auto& [id, imgs] : phi)
    for (auto i : p.target.vertices.at(id)->free_vars()) out[id].push_back(imgs.at(i));
  return out;
}

json quiver_json(const std::string& command, const QuiverReport& r, const QuiverProblem& p,
                 const std::string& src, const std::string& tgt) {
  json j = header(command, to_string(r.verdict));
  j["degree"] = r.degree;
  if (r.verdict == Verdict::Success) {
    json phi;
    for (const auto& [id, imgs] : r.phi) phi[id] = free_strings(p.target.vertices.at(id), imgs);
    j["phi"] = phi;
    if (!r.base.empty()) j["base"] = strings(r.base);
    SolutionDecl s{src, tgt, true, free_phi(p, r.phi), r.base};
    j["solution"] = print_solution("witness", s);
  } else {
    j["order"] = r.order;
    j["residual"] = residual(r.residual);
  }
  if (!r.message.empty()) j["message"] = r.message;
  j["log"] = log_json(r.log);
  return j;
}

SolveRequest request(const Workspace& ws, const std::string& group, const std::string& lhs,
                     const std::string& rhs, int degree) {
  check_degree(degree);
  SolveRequest req;
  req.group = parse_group_tag(group);
  req.f_tilde = ws.map(lhs);
  req.f = ws.map(rhs);
  req.degree = degree;
  return req;
}

struct Emitter {
  std::ostream& out;
  std::string path;

  void operator()(const json& j) const {
    std::string text = j.dump(2) + "\n";
    if (path.empty()) {
      out << text;
    } else {
      std::ofstream f(path);
      if (!f) throw InputError("cannot write '" + path + "'");
      f << text;
    }
  }
};

}  // namespace

int exit_code(const std::string& verdict) {
  if (verdict == "success" || verdict == "valid" || verdict == "determined-at-order" ||
      verdict == "not-determined")
    return 0;
  if (verdict == "obstructed" || verdict == "mismatch") return 10;
  if (verdict == "seed-required") return 11;
  if (verdict == "input-error" || verdict == "invalid") return 2;
  if (verdict == "unsupported") return 12;
  return 1;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Equivalence of map-germs at finite jet order", "germforge"};
  app.require_subcommand(1);
  std::string ws_path, out_path, group = "R", lhs, rhs, map_name, element, quiver, src_q, tgt_q,
                                  solution;
  int degree = 0, order = 0, jobs = 1;
  bool freeze = false;
  std::vector<std::string> constraints, basis;
  std::vector<int> schedule;
  std::string verdict;
  json report;

  auto common = [&](CLI::App* c) {
    c->add_option("workspace", ws_path, "Workspace file, or - for stdin")->required();
    c->add_option("--out", out_path, "Write the report here instead of stdout");
  };
  auto pair = [&](CLI::App* c) {
    c->add_option("--group", group, "R, L, LR, C or K")->required();
    c->add_option("--lhs", lhs, "Map f~ to reach")->required();
    c->add_option("--rhs", rhs, "Map f acted on")->required();
  };

  auto* solve = app.add_subcommand("solve", "Solve g.f = f~ modulo m^d");
  common(solve);
  pair(solve);
  solve->add_option("--degree", degree)->required();
  solve->add_option("--seed", element, "Element used as the starting point");
  solve->add_option("--constraint", constraints, "'<X|Y> <variant> [args]'");

  auto* verify = app.add_subcommand("verify", "Check g.f = f~ modulo m^d for a declared element");
  common(verify);
  verify->add_option("--lhs", lhs)->required();
  verify->add_option("--rhs", rhs)->required();
  verify->add_option("--element", element)->required();
  verify->add_option("--degree", degree)->required();

  auto* qv = app.add_subcommand("quiver", "Quivers of map-germs");
  qv->require_subcommand(1);
  auto* qvalidate = qv->add_subcommand("validate", "Check that a quiver is a rooted tree");
  common(qvalidate);
  qvalidate->add_option("--quiver", quiver)->required();
  auto* qsolve = qv->add_subcommand("solve", "Solve for a morphism between two quivers");
  auto* qbase = qv->add_subcommand("base-change", "Solve with a base change of the parameters");
  for (auto* c : {qsolve, qbase}) {
    common(c);
    c->add_option("--source", src_q, "Quiver of the f~")->required();
    c->add_option("--target", tgt_q, "Quiver of the f")->required();
    c->add_option("--degree", degree)->required();
  }
  qbase->add_flag("--freeze-base", freeze, "Keep the parameters fixed");
  auto* qpurify = qv->add_subcommand("purify", "Purify a non-pure solution");
  common(qpurify);
  qpurify->add_option("--solution", solution)->required();
  auto* qcheck = qv->add_subcommand("check", "Verify a pure solution");
  common(qcheck);
  qcheck->add_option("--solution", solution)->required();
  qcheck->add_option("--degree", degree)->required();

  auto* ifs = app.add_subcommand("encode-ifs", "Emit the implicit-function system");
  common(ifs);
  pair(ifs);

  auto* tan = app.add_subcommand("tangent", "Tangent space and determinacy");
  common(tan);
  tan->add_option("--group", group)->required();
  tan->add_option("--map", map_name)->required();
  tan->add_option("--order", order, "k")->required();

  auto* nf = app.add_subcommand("normal-form", "Reduce an unfolding to f_o + sum c_k(t) v_k");
  common(nf);
  nf->add_option("--group", group)->required();
  nf->add_option("--map", map_name)->required();
  nf->add_option("--basis", basis, "Maps giving the vectors v_k");
  nf->add_option("--degree", degree)->required();

  auto* probe = app.add_subcommand("probe", "Solve at each degree of a schedule");
  common(probe);
  pair(probe);
  probe->add_option("--schedule", schedule)->required()->delimiter(',');
  probe->add_option("--constraint", constraints);
  probe->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);

  auto* print = app.add_subcommand("print", "Print the workspace in canonical form");
  print->add_option("workspace", ws_path)->required();


  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  Emitter emit{out, out_path};
  std::string command;
  for (CLI::App* c = &app; !c->get_subcommands().empty();) {
    c = c->get_subcommands().front();
    command += (command.empty() ? "" : " ") + c->get_name();
  }
  try {
    if (print->parsed()) {
      out << print_workspace(load(ws_path, in));
      return 0;
    }
    Workspace ws = load(ws_path, in);

    if (solve->parsed()) {
      SolveRequest req = request(ws, group, lhs, rhs, degree);
      for (const auto& c : constraints) req.constraints.push_back(constraint_arg(c));
      if (!element.empty()) req.seed = ws.element(element).element;
      SolveReport r = solve_equivalence(req);
      report = solve_json(r, req.f);
    } else if (verify->parsed()) {
      check_degree(degree);
      const GermMap& f = ws.map(rhs);
      const GermMap& ft = ws.map(lhs);
      const GroupElement& g = ws.element(element).element;
      auto v = validate_group_element(g);
      bool ok = v.valid && maps_equal_mod(apply(g, f), ft, degree);
      report = header("verify", ok ? "success" : "mismatch");
      report["degree"] = degree;
      if (!v.valid) report["message"] = v.reason;
    } else if (qvalidate->parsed()) {
      QuiverSpec q = ws.quiver_spec(quiver);
      auto v = validate_quiver(q);
      report = header(command, v.valid ? "valid" : "invalid");
      if (v.valid) {
        auto g = grade_vertices(q);
        report["root"] = g.root;
        json grades;
        for (const auto& [id, k] : g.grade) grades[id] = k;
        report["grades"] = grades;
        report["nest"] = g.nest;
      } else {
        report["reason"] = v.reason;
        report["detail"] = v.detail;
      }
    } else if (qsolve->parsed() || qbase->parsed()) {
      check_degree(degree);
      QuiverProblem p = ws.quiver_problem(src_q, tgt_q);
      auto v = validate_quiver(p.source);
      if (!v.valid) throw InputError("invalid quiver (" + v.reason + "): " + v.detail);
      QuiverReport r = qsolve->parsed() ? solve_quiver(p, degree)
                                        : solve_with_base_change(p, degree, freeze);
      report = quiver_json(command, r, p, src_q, tgt_q);
    } else if (qpurify->parsed()) {
      const SolutionDecl& s = ws.solution(solution);
      QuiverProblem p = ws.quiver_problem(s.source, s.target);
      PurifyResult r = purify(p, ws.nonpure(solution));
      bool ok = std::all_of(r.steps.begin(), r.steps.end(), [](const PurifyStep& st) { return st.edges_hold; });
      report = header(command, ok ? "success" : "internal-error");
      json steps = json::array();
      for (const auto& st : r.steps)
        steps.push_back({{"description", st.description}, {"edges_hold", st.edges_hold}});
      report["steps"] = steps;
      json phi;
      for (const auto& [id, imgs] : r.phi) phi[id] = free_strings(p.target.vertices.at(id), imgs);
      report["phi"] = phi;
      report["solution"] = print_solution("purified", {s.source, s.target, true, free_phi(p, r.phi), {}});
    } else if (qcheck->parsed()) {
      check_degree(degree);
      const SolutionDecl& s = ws.solution(solution);
      QuiverProblem p = ws.quiver_problem(s.source, s.target);
      bool ok = check_rectangles(p, ws.solution_phi(solution), degree);
      report = header(command, ok ? "success" : "mismatch");
      report["degree"] = degree;
    } else if (ifs->parsed()) {
      IFSystem sys = encode_ifs(parse_group_tag(group), ws.map(rhs), ws.map(lhs));
      report = header(command, "success");
      report["nest"] = sys.nest;
      json us = json::array();
      for (const auto& u : sys.unknowns) us.push_back(u.name);
      report["unknowns"] = us;
      report["equations"] = sys.equations.size();
      report["system"] = sys.to_text();
    } else if (tan->parsed()) {
      check_degree(order);
      TangentReport t = tangent_space(parse_group_tag(group), ws.map(map_name), order);
      report = header(command, t.determined ? "determined-at-order" : "not-determined");
      report["group"] = to_string(t.group);
      report["order"] = t.k;
      report["dimension"] = t.dimension;
      report["slice_dimension"] = t.slice_dimension;
      report["missing"] = t.missing;
      json b = json::array();
      for (const auto& v : t.basis) b.push_back(strings(v));
      report["basis"] = b;
    } else if (nf->parsed()) {
      check_degree(degree);
      const GermMap& f = ws.map(map_name);
      std::vector<std::vector<Jet>> vs;
      for (const auto& b : basis) {
        const GermMap& v = ws.map(b);
        if (v.source != f.source || v.target != f.target)
          throw InputError("basis map " + b + " must have the rings of " + map_name);
        std::vector<Jet> comps;
        for (auto i : f.target->free_vars()) comps.push_back(v.components[i]);
        vs.push_back(comps);
      }
      NormalFormReport r = unfolding_normal_form(parse_group_tag(group), f, vs, degree);
      report = header(command, to_string(r.verdict));
      report["degree"] = degree;
      if (r.verdict == Verdict::Success) {
        report["coefficients"] = strings(r.coefficients);
        report["phi_x"] = free_strings(f.source, r.phi_x);
        if (!r.phi_y.empty()) report["phi_y"] = free_strings(f.target, r.phi_y);
      } else {
        report["order"] = r.order;
        report["residual"] = residual(r.residual);
      }
      if (!r.message.empty()) report["message"] = r.message;
    } else if (probe->parsed()) {
      SolveRequest base = request(ws, group, lhs, rhs, 2);
      for (int d : schedule) check_degree(d);
      for (const auto& c : constraints) base.constraints.push_back(constraint_arg(c));
      std::vector<SolveReport> results(schedule.size());
      std::vector<std::string> errors(schedule.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next++) < schedule.size();) {
          SolveRequest req = base;
          req.degree = schedule[i];
          try {
            results[i] = solve_equivalence(req);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (int t = 1; t < std::min<int>(jobs, static_cast<int>(schedule.size())); ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      for (const auto& e : errors)
        if (!e.empty()) throw DomainError(e);
      json entries = json::array();
      int best = 0;
      std::string first = "success";
      json obstruction;
      for (std::size_t i = 0; i < schedule.size(); ++i) {
        const SolveReport& r = results[i];
        json e = {{"degree", schedule[i]}, {"verdict", to_string(r.verdict)}};
        if (r.verdict == Verdict::Success) {
          best = std::max(best, schedule[i]);
        } else {
          e["order"] = r.order;
          if (first == "success") {
            first = to_string(r.verdict);
            obstruction = {{"degree", schedule[i]}, {"order", r.order}};
          }
        }
        entries.push_back(e);
      }
      report = header(command, first);
      report["group"] = to_string(base.group);
      report["entries"] = entries;
      report["max_achieved"] = best;
      if (!obstruction.is_null()) report["first_obstruction"] = obstruction;
    }
  } catch (const InputError& e) {
    verdict = "input-error";
    report = header(command, verdict);
    report["message"] = e.what();
  } catch (const ParseError& e) {
    verdict = "input-error";
    report = header(command, verdict);
    report["message"] = e.what();
    report["line"] = e.line();
    report["column"] = e.column();
  } catch (const UnsupportedError& e) {
    report = header(command, "unsupported");
    report["message"] = e.what();
  } catch (const DomainError& e) {
    report = header(command, "input-error");
    report["message"] = e.what();
  } catch (const StructuralError& e) {
    report = header(command, "input-error");
    report["message"] = e.what();
  } catch (const std::exception& e) {
    report = header(command, "internal-error");
    report["message"] = e.what();
  }
  verdict = report["verdict"].get<std::string>();
  if (report.contains("message") && exit_code(verdict) != 0 && verdict != "obstructed" &&
      verdict != "seed-required")
    err << "germforge: " << report["message"].get<std::string>() << "\n";
  try {
    emit(report);
  } catch (const InputError& e) {
    err << "germforge: " << e.what() << "\n";
    return 2;
  }
  return exit_code(verdict);
}

}  // namespace germforge::cli
