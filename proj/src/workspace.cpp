#include "germforge/workspace.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "germforge/errors.hpp"

namespace germforge {

namespace {

struct Raw {
  std::string text;
  int line = 1;
  int column = 1;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(const std::string& s, int line = 1, int column = 1)
      : s_(s), line_(line), col_(column) {}

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool done() {
    skip();
    return pos_ >= s_.size();
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

  Raw word(const char* what = "name") {
    skip();
    Raw r{"", line_, col_};
    while (pos_ < s_.size() && word_char(s_[pos_])) {
      r.text += s_[pos_];
      advance();
    }
    if (r.text.empty()) fail(std::string("expected ") + what);
    return r;
  }

  bool peek_word(const std::string& w) {
    skip();
    std::size_t n = w.size();
    return s_.compare(pos_, n, w) == 0 && (pos_ + n >= s_.size() || !word_char(s_[pos_ + n]));
  }

  void keyword(const std::string& w) {
    if (!peek_word(w)) fail("expected '" + w + "'");
    word();
  }

  bool peek(const std::string& p) {
    skip();
    return s_.compare(pos_, p.size(), p) == 0;
  }

  bool accept(const std::string& p) {
    if (!peek(p)) return false;
    for (std::size_t i = 0; i < p.size(); ++i) advance();
    return true;
  }

  void expect(const std::string& p) {
    if (!accept(p)) fail("expected '" + p + "'");
  }

  int number() {
    Raw r = word("number");
    try {
      std::size_t used = 0;
      long v = std::stol(r.text, &used);
      if (used != r.text.size() || v < 0 || v > 1000000000) throw std::out_of_range("");
      return static_cast<int>(v);
    } catch (const std::logic_error&) {
      throw ParseError("expected a nonnegative integer, got '" + r.text + "'", r.line, r.column);
    }
  }

  /// `[ a; b; ... ]`, items with their positions; comments are dropped.
  std::vector<Raw> bracket() {
    expect("[");
    std::vector<Raw> out;
    Raw cur{"", line_, col_};
    bool started = false;
    int depth = 0;
    auto flush = [&] {
      while (!cur.text.empty() && std::isspace(static_cast<unsigned char>(cur.text.back())))
        cur.text.pop_back();
      if (!cur.text.empty()) out.push_back(cur);
      cur = Raw{"", line_, col_};
      started = false;
    };
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated '['");
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
        continue;
      }
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ']' && depth <= 0) {
        flush();
        advance();
        return out;
      }
      if (c == ';' && depth <= 0) {
        advance();
        flush();
        continue;
      }
      if (!started && std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (!started) {
        cur.line = line_;
        cur.column = col_;
        started = true;
      }
      cur.text += c;
      advance();
    }
  }

  int line() const { return line_; }
  int column() const { return col_; }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
  int col_;
};

std::vector<std::string> texts(const std::vector<Raw>& items) {
  std::vector<std::string> out;
  for (const auto& r : items) out.push_back(r.text);
  return out;
}

std::vector<Jet> parse_items(const std::vector<Raw>& items, const VarSetPtr& vars, Field field,
                             int trunc) {
  std::vector<Jet> out;
  for (const auto& r : items) out.push_back(parse_jet(r.text, vars, field, trunc, r.line, r.column));
  return out;
}

Constraint read_constraint(Lexer& lx, const std::string& target) {
  Raw v = lx.word("constraint variant");
  Constraint c;
  c.target = target;
  try {
    c.kind = parse_constraint_kind(v.text);
  } catch (const Error&) {
    throw ParseError("unknown constraint variant '" + v.text + "'", v.line, v.column);
  }
  using K = Constraint::Kind;
  switch (c.kind) {
    case K::IdealOffset:
    case K::VanishInto:
      c.ideal = texts(lx.bracket());
      break;
    case K::MapsSubgerm:
      c.ideal = texts(lx.bracket());
      c.ideal_tilde = texts(lx.bracket());
      break;
    case K::FilteredLevel:
      c.level = lx.number();
      c.ideal = texts(lx.bracket());
      break;
    default:
      break;
  }
  return c;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string bracket_text(const std::vector<std::string>& items) {
  return items.empty() ? "[ ]" : "[ " + join(items, "; ") + " ]";
}

std::vector<std::string> jet_texts(const std::vector<Jet>& js) {
  std::vector<std::string> out;
  for (const auto& j : js) out.push_back(j.to_string());
  return out;
}

std::vector<Jet> free_part(const RingPtr& target, const std::vector<Jet>& images) {
  std::vector<Jet> out;
  for (auto i : target->free_vars()) out.push_back(images.at(i));
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lx_(text) {}

  Workspace run() {
    while (!lx_.done()) {
      Raw kw = lx_.word("declaration");
      if (kw.text == "field") field(kw);
      else if (kw.text == "ring") ring();
      else if (kw.text == "map") map();
      else if (kw.text == "quiver") quiver();
      else if (kw.text == "element") element();
      else if (kw.text == "solution") solution(true);
      else if (kw.text == "nonpure") solution(false);
      else throw ParseError("unknown declaration '" + kw.text + "'", kw.line, kw.column);
      lx_.accept(";");
    }
    return std::move(ws_);
  }

 private:
  Field need_field(const Raw& at) {
    if (!ws_.field) throw ParseError("no field declared", at.line, at.column);
    return *ws_.field;
  }

  Raw new_name(const std::string& kind) {
    Raw n = lx_.word();
    if (!names_.insert(n.text).second)
      throw ParseError(kind + " '" + n.text + "' redeclares a name", n.line, n.column);
    ws_.order.emplace_back(kind, n.text);
    return n;
  }

  template <class M>
  const typename M::mapped_type& lookup(const M& m, const Raw& n, const std::string& kind) {
    auto it = m.find(n.text);
    if (it == m.end()) throw ParseError("undeclared " + kind + " '" + n.text + "'", n.line, n.column);
    return it->second;
  }

  void field(const Raw& kw) {
    if (ws_.field) throw ParseError("second field declaration", kw.line, kw.column);
    Raw f = lx_.word("field");
    if (f.text == "Q") {
      ws_.field = Field::rationals();
    } else if (f.text == "Fp") {
      int line = lx_.line(), col = lx_.column();
      int p = lx_.number();
      try {
        ws_.field = Field::prime(static_cast<std::uint32_t>(p));
      } catch (const Error& e) {
        throw ParseError(e.what(), line, col);
      }
    } else {
      throw ParseError("field must be 'Q' or 'Fp <p>'", f.line, f.column);
    }
    ws_.order.emplace_back("field", "");
  }

  void ring() {
    Raw n = new_name("ring");
    Field F = need_field(n);
    lx_.keyword("vars");
    std::vector<std::string> vars, params;
    while (!lx_.peek_word("tblock") && !lx_.peek_word("trunc")) vars.push_back(lx_.word("variable").text);
    if (lx_.peek_word("tblock")) {
      lx_.word();
      while (!lx_.peek_word("trunc")) params.push_back(lx_.word("parameter").text);
    }
    lx_.keyword("trunc");
    int D = lx_.number();
    std::vector<Raw> ideal;
    if (lx_.peek_word("ideal")) {
      lx_.word();
      ideal = lx_.bracket();
    }
    try {
      std::vector<VariableBlock> blocks{VariableBlock{"x", vars, false}};
      if (!params.empty()) blocks.push_back(VariableBlock{"t", params, true});
      auto vs = make_variables(blocks);
      auto gens = parse_items(ideal, vs, F, D);
      ws_.rings[n.text] = make_ring(n.text, vs, F, D, gens);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), n.line, n.column);
    }
  }

  void map() {
    Raw n = new_name("map");
    lx_.expect(":");
    Raw s = lx_.word("ring"), t;
    lx_.expect("->");
    t = lx_.word("ring");
    const RingPtr& src = lookup(ws_.rings, s, "ring");
    const RingPtr& tgt = lookup(ws_.rings, t, "ring");
    auto comps = parse_items(lx_.bracket(), src->vars(), src->field(), src->trunc());
    try {
      ws_.maps.emplace(n.text, make_map(src, tgt, comps));
    } catch (const Error& e) {
      throw ParseError(e.what(), n.line, n.column);
    }
  }

  void quiver() {
    Raw n = new_name("quiver");
    QuiverDecl q;
    std::set<std::string> ids;
    lx_.expect("{");
    while (!lx_.accept("}")) {
      if (lx_.done()) lx_.fail("unterminated quiver");
      Raw kw = lx_.word("quiver statement");
      if (kw.text == "vertex") {
        Raw id = lx_.word("vertex id");
        lx_.keyword("ring");
        Raw r = lx_.word("ring");
        lookup(ws_.rings, r, "ring");
        if (!ids.insert(id.text).second)
          throw ParseError("vertex '" + id.text + "' declared twice", id.line, id.column);
        q.vertices.emplace_back(id.text, r.text);
      } else if (kw.text == "edge") {
        QuiverDecl::Edge e;
        Raw a = lx_.word("vertex id");
        lx_.expect("->");
        Raw b = lx_.word("vertex id");
        lx_.keyword("map");
        Raw m = lx_.word("map");
        lookup(ws_.maps, m, "map");
        for (const Raw* v : {&a, &b})
          if (!ids.count(v->text)) throw ParseError("undeclared vertex '" + v->text + "'", v->line, v->column);
        q.edges.push_back({a.text, b.text, m.text});
      } else if (kw.text == "constraint") {
        Raw id = lx_.word("vertex id");
        if (!ids.count(id.text)) throw ParseError("undeclared vertex '" + id.text + "'", id.line, id.column);
        q.constraints.push_back(read_constraint(lx_, id.text));
      } else {
        throw ParseError("unknown quiver statement '" + kw.text + "'", kw.line, kw.column);
      }
      lx_.accept(";");
    }
    ws_.quivers.emplace(n.text, std::move(q));
  }

  void element() {
    Raw n = new_name("element");
    Raw tag = lx_.word("group");
    ElementDecl e;
    GroupTag g;
    try {
      g = parse_group_tag(tag.text);
    } catch (const Error&) {
      throw ParseError("unknown group '" + tag.text + "'", tag.line, tag.column);
    }
    lx_.expect(":");
    Raw s = lx_.word("ring");
    lx_.expect("->");
    Raw t = lx_.word("ring");
    const RingPtr& src = lookup(ws_.rings, s, "ring");
    const RingPtr& tgt = lookup(ws_.rings, t, "ring");
    e.source = s.text;
    e.target = t.text;
    try {
      e.element = identity_element(g, src, tgt);
    } catch (const Error& err) {
      throw ParseError(err.what(), n.line, n.column);
    }
    lx_.expect("{");
    while (!lx_.accept("}")) {
      if (lx_.done()) lx_.fail("unterminated element");
      Raw part = lx_.word("element part");
      auto items = lx_.bracket();
      try {
        if (part.text == "phi" && e.element.phi) {
          e.element.phi->images = with_fixed_params(src, src, parse_items(items, src->vars(), src->field(), src->trunc()));
        } else if (part.text == "psi" && e.element.psi) {
          e.element.psi->images = with_fixed_params(tgt, tgt, parse_items(items, tgt->vars(), tgt->field(), tgt->trunc()));
        } else if (part.text == "contact" && e.element.contact) {
          const RingPtr& pr = e.element.contact->product.ring;
          auto C = parse_items(items, pr->vars(), pr->field(), pr->trunc());
          if (C.size() != tgt->free_vars().size())
            throw StructuralError("contact needs one component per free target variable");
          e.element.contact->C = C;
        } else {
          throw ParseError("group " + to_string(g) + " has no part '" + part.text + "'", part.line, part.column);
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        throw ParseError(err.what(), part.line, part.column);
      }
      lx_.accept(";");
    }
    ws_.elements.emplace(n.text, std::move(e));
  }

  void solution(bool pure) {
    Raw n = new_name(pure ? "solution" : "nonpure");
    SolutionDecl s;
    s.pure = pure;
    lx_.expect(":");
    Raw a = lx_.word("quiver");
    lx_.expect("->");
    Raw b = lx_.word("quiver");
    lookup(ws_.quivers, a, "quiver");
    lookup(ws_.quivers, b, "quiver");
    s.source = a.text;
    s.target = b.text;
    QuiverProblem p;
    std::optional<CombinedRing> comb;
    try {
      p = ws_.quiver_problem(a.text, b.text);
      if (!pure) comb = combined_ring(p.source);
    } catch (const Error& e) {
      throw ParseError(e.what(), n.line, n.column);
    }
    std::vector<Raw> base;
    bool has_base = false;
    lx_.expect("{");
    while (!lx_.accept("}")) {
      if (lx_.done()) lx_.fail("unterminated solution");
      Raw kw = lx_.word("solution statement");
      if (kw.text == "base" && pure) {
        base = lx_.bracket();
        has_base = true;
      } else if (kw.text == "vertex") {
        Raw id = lx_.word("vertex id");
        if (!p.source.vertices.count(id.text))
          throw ParseError("undeclared vertex '" + id.text + "'", id.line, id.column);
        const RingPtr& src = p.source.vertices.at(id.text);
        const RingPtr& tgt = p.target.vertices.at(id.text);
        RingPtr over = pure ? src : comb->ring;
        auto items = parse_items(lx_.bracket(), over->vars(), over->field(), over->trunc());
        if (items.size() != tgt->free_vars().size())
          throw ParseError("vertex " + id.text + " needs one image per free variable", id.line, id.column);
        s.phi[id.text] = items;
      } else {
        throw ParseError("unknown solution statement '" + kw.text + "'", kw.line, kw.column);
      }
      lx_.accept(";");
    }
    for (const auto& [id, r] : p.source.vertices)
      if (!s.phi.count(id)) throw ParseError("no images for vertex '" + id + "'", n.line, n.column);
    if (has_base) {
      auto root = grade_vertices(p.source).root;
      const RingPtr& rr = p.source.vertices.at(root);
      s.base = parse_items(base, rr->vars(), rr->field(), rr->trunc());
      if (s.base.size() != rr->param_vars().size())
        throw ParseError("base needs one image per parameter", n.line, n.column);
    }
    ws_.solutions.emplace(n.text, std::move(s));
  }

  Lexer lx_;
  Workspace ws_;
  std::set<std::string> names_;
};

}  // namespace

std::vector<Jet> with_fixed_params(const RingPtr& source, const RingPtr& target,
                                   std::vector<Jet> free_images) {
  auto free = target->free_vars();
  if (free_images.size() == target->size()) return free_images;
  if (free_images.size() != free.size())
    throw StructuralError("expected one image per free variable of " + target->name());
  std::vector<Jet> full(target->size(), source->zero());
  for (std::size_t k = 0; k < free.size(); ++k) full[free[k]] = free_images[k];
  for (auto i : target->param_vars()) {
    auto j = source->vars()->index_of(target->vars()->name(i));
    if (!j) throw StructuralError("parameter " + target->vars()->name(i) + " missing in " + source->name());
    full[i] = source->var(*j);
  }
  return full;
}

const RingPtr& Workspace::ring(const std::string& name) const {
  auto it = rings.find(name);
  if (it == rings.end()) throw DomainError("undeclared ring '" + name + "'");
  return it->second;
}

const GermMap& Workspace::map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end()) throw DomainError("undeclared map '" + name + "'");
  return it->second;
}

const QuiverDecl& Workspace::quiver(const std::string& name) const {
  auto it = quivers.find(name);
  if (it == quivers.end()) throw DomainError("undeclared quiver '" + name + "'");
  return it->second;
}

const ElementDecl& Workspace::element(const std::string& name) const {
  auto it = elements.find(name);
  if (it == elements.end()) throw DomainError("undeclared element '" + name + "'");
  return it->second;
}

const SolutionDecl& Workspace::solution(const std::string& name) const {
  auto it = solutions.find(name);
  if (it == solutions.end()) throw DomainError("undeclared solution '" + name + "'");
  return it->second;
}

QuiverSpec Workspace::quiver_spec(const std::string& name) const {
  const QuiverDecl& d = quiver(name);
  QuiverSpec q;
  for (const auto& [id, r] : d.vertices) q.vertices[id] = ring(r);
  for (const auto& e : d.edges) q.edges.push_back({e.from, e.to, map(e.map)});
  return q;
}

QuiverProblem Workspace::quiver_problem(const std::string& source, const std::string& target) const {
  QuiverProblem p;
  p.source = quiver_spec(source);
  p.target = quiver_spec(target);
  std::set<std::string> a, b;
  for (const auto& [id, r] : p.source.vertices) a.insert(id);
  for (const auto& [id, r] : p.target.vertices) b.insert(id);
  if (a != b) throw StructuralError("quivers " + source + " and " + target + " have different vertices");
  std::set<std::pair<std::string, std::string>> ea, eb;
  for (const auto& e : p.source.edges) ea.emplace(e.from, e.to);
  for (const auto& e : p.target.edges) eb.emplace(e.from, e.to);
  if (ea != eb || ea.size() != p.source.edges.size() || eb.size() != p.target.edges.size())
    throw StructuralError("quivers " + source + " and " + target + " have different edges");
  for (const auto* d : {&quiver(source), &quiver(target)})
    for (const auto& c : d->constraints) p.constraints[c.target].push_back(c);
  return p;
}

std::map<std::string, std::vector<Jet>> Workspace::solution_phi(const std::string& name) const {
  const SolutionDecl& s = solution(name);
  if (!s.pure) throw DomainError("solution '" + name + "' is not pure");
  QuiverProblem p = quiver_problem(s.source, s.target);
  std::map<std::string, std::vector<Jet>> out;
  for (const auto& [id, imgs] : s.phi) {
    const RingPtr& src = p.source.vertices.at(id);
    const RingPtr& tgt = p.target.vertices.at(id);
    auto full = with_fixed_params(src, tgt, imgs);
    auto tp = tgt->param_vars();
    for (std::size_t k = 0; k < tp.size() && !s.base.empty(); ++k)
      full[tp[k]] = src->parse(s.base[k].to_string());
    out[id] = std::move(full);
  }
  return out;
}

NonPureSolution Workspace::nonpure(const std::string& name) const {
  const SolutionDecl& s = solution(name);
  if (s.pure) throw DomainError("solution '" + name + "' is pure");
  QuiverProblem p = quiver_problem(s.source, s.target);
  NonPureSolution np;
  np.ring = combined_ring(p.source);
  for (const auto& [id, imgs] : s.phi)
    np.psi[id] = with_fixed_params(np.ring.ring, p.target.vertices.at(id), imgs);
  return np;
}

Workspace parse_workspace(const std::string& text) { return Parser(text).run(); }

Constraint parse_constraint(const std::string& target, const std::string& text) {
  Lexer lx(text);
  Constraint c = read_constraint(lx, target);
  if (!lx.done()) lx.fail("trailing text after constraint");
  return c;
}

std::string print_constraint(const Constraint& c) {
  using K = Constraint::Kind;
  std::string out = to_string(c.kind);
  switch (c.kind) {
    case K::IdealOffset:
    case K::VanishInto:
      out += " " + bracket_text(c.ideal);
      break;
    case K::MapsSubgerm:
      out += " " + bracket_text(c.ideal) + " " + bracket_text(c.ideal_tilde);
      break;
    case K::FilteredLevel:
      out += " " + std::to_string(c.level) + " " + bracket_text(c.ideal);
      break;
    default:
      break;
  }
  return out;
}

std::string print_ring(const std::string& name, const RingPtr& r) {
  std::string out = "ring " + name + " vars";
  for (auto i : r->free_vars()) out += " " + r->vars()->name(i);
  if (r->has_params()) {
    out += " tblock";
    for (auto i : r->param_vars()) out += " " + r->vars()->name(i);
  }
  out += " trunc " + std::to_string(r->trunc());
  out += " ideal " + bracket_text(jet_texts(r->ideal().generators()));
  return out;
}

std::string print_map(const std::string& name, const std::string& source,
                      const std::string& target, const GermMap& f) {
  return "map " + name + " : " + source + " -> " + target + " " +
         bracket_text(jet_texts(free_part(f.target, f.components)));
}

std::string print_element(const std::string& name, const ElementDecl& e) {
  const GroupElement& g = e.element;
  std::vector<std::string> parts;
  if (g.phi) parts.push_back("phi " + bracket_text(jet_texts(free_part(g.source, g.phi->images))));
  if (g.psi) parts.push_back("psi " + bracket_text(jet_texts(free_part(g.target, g.psi->images))));
  if (g.contact) parts.push_back("contact " + bracket_text(jet_texts(g.contact->C)));
  return "element " + name + " " + to_string(g.tag) + " : " + e.source + " -> " + e.target +
         " { " + join(parts, "; ") + " }";
}

std::string print_solution(const std::string& name, const SolutionDecl& s) {
  std::ostringstream out;
  out << (s.pure ? "solution " : "nonpure ") << name << " : " << s.source << " -> " << s.target
      << " {\n";
  for (const auto& [id, imgs] : s.phi)
    out << "  vertex " << id << " " << bracket_text(jet_texts(imgs)) << ";\n";
  if (!s.base.empty()) out << "  base " << bracket_text(jet_texts(s.base)) << ";\n";
  out << "}";
  return out.str();
}

std::string print_workspace(const Workspace& ws) {
  std::ostringstream out;
  for (const auto& [kind, name] : ws.order) {
    if (kind == "field") {
      out << "field " << (ws.field->is_rational() ? std::string("Q") : "Fp " + std::to_string(ws.field->characteristic()))
          << "\n";
    } else if (kind == "ring") {
      out << print_ring(name, ws.rings.at(name)) << "\n";
    } else if (kind == "map") {
      const GermMap& f = ws.maps.at(name);
      out << print_map(name, f.source->name(), f.target->name(), f) << "\n";
    } else if (kind == "quiver") {
      const QuiverDecl& q = ws.quivers.at(name);
      out << "quiver " << name << " {\n";
      for (const auto& [id, r] : q.vertices) out << "  vertex " << id << " ring " << r << ";\n";
      for (const auto& e : q.edges) out << "  edge " << e.from << " -> " << e.to << " map " << e.map << ";\n";
      for (const auto& c : q.constraints) out << "  constraint " << c.target << " " << print_constraint(c) << ";\n";
      out << "}\n";
    } else if (kind == "element") {
      out << print_element(name, ws.elements.at(name)) << "\n";
    } else {
      out << print_solution(name, ws.solutions.at(name)) << "\n";
    }
  }
  return out.str();
}

}  // namespace germforge
