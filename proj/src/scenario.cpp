#include "nrgit/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nrgit {

namespace {

struct Line {
  size_t no = 0;
  std::string text;  // comment stripped
};

struct Section {
  size_t header = 0;
  std::vector<Line> lines;
};

[[noreturn]] void syntax(const std::string& msg, size_t line, size_t col) { throw ParseError(msg, line, col); }
[[noreturn]] void semantic(const std::string& kind, const std::string& msg, size_t line, size_t col = 1) {
  throw ScenarioError(kind, kind + ": " + msg, line, col);
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// [b, e) of the trimmed text within s[from, to).
std::pair<size_t, size_t> trim_range(const std::string& s, size_t from, size_t to) {
  while (from < to && is_space(s[from])) ++from;
  while (to > from && is_space(s[to - 1])) --to;
  return {from, to};
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

struct Field {
  std::string text;
  size_t col = 1;  // 1-based column of text[0]
};

Field field(const Line& l, size_t from, size_t to) {
  auto [b, e] = trim_range(l.text, from, to);
  return {l.text.substr(b, e - b), b + 1};
}

// Splits "lhs <sep> rhs" at the first separator.
std::pair<Field, Field> split(const Line& l, char sep, const std::string& what) {
  size_t at = l.text.find(sep);
  if (at == std::string::npos) {
    auto f = field(l, 0, l.text.size());
    syntax("expected '" + std::string(1, sep) + "' in " + what, l.no, f.col);
  }
  return {field(l, 0, at), field(l, at + 1, l.text.size())};
}

Field identifier(const Field& f, size_t line, const std::string& what) {
  if (!is_identifier(f.text)) syntax("invalid " + what + " '" + f.text + "'", line, f.col);
  return f;
}

long integer(const Field& f, size_t line) {
  long v = 0;
  const char* end = f.text.data() + f.text.size();
  auto [p, ec] = std::from_chars(f.text.data(), end, v);
  if (f.text.empty() || ec != std::errc() || p != end) syntax("expected an integer, got '" + f.text + "'", line, f.col);
  return v;
}

bool boolean(const Field& f, size_t line) {
  if (f.text == "true" || f.text == "1") return true;
  if (f.text == "false" || f.text == "0") return false;
  syntax("expected true or false, got '" + f.text + "'", line, f.col);
}

std::map<std::string, Section> split_sections(const std::string& text) {
  static const std::vector<std::string> known = {"ring", "relations", "lie", "action", "options"};
  std::map<std::string, Section> out;
  std::istringstream in(text);
  std::string raw;
  size_t no = 0;
  Section* cur = nullptr;
  while (std::getline(in, raw)) {
    ++no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Line l{no, raw.substr(0, raw.find('#'))};
    auto [b, e] = trim_range(l.text, 0, l.text.size());
    if (b == e) continue;
    std::string t = l.text.substr(b, e - b);
    if (t.front() == '[' && t.back() == ']' && is_identifier(t.substr(1, t.size() - 2))) {
      std::string name = t.substr(1, t.size() - 2);
      if (std::find(known.begin(), known.end(), name) == known.end())
        syntax("unknown section [" + name + "]", no, b + 1);
      if (out.count(name)) syntax("duplicate section [" + name + "]", no, b + 1);
      cur = &out[name];
      cur->header = no;
      continue;
    }
    if (!cur) syntax("content before the first section header", no, b + 1);
    cur->lines.push_back(l);
  }
  if (!out.count("ring")) syntax("missing [ring] section", 1, 1);
  return out;
}

struct Locations {
  std::vector<size_t> ring;                              // per variable
  std::vector<size_t> relations;                         // per relation
  std::map<std::pair<size_t, size_t>, size_t> brackets;  // explicit [a,b]
  std::map<std::pair<size_t, size_t>, size_t> action;    // (j, g)
  size_t lie = 1, action_header = 1;
};

void parse_ring(const Section& sec, Scenario& s, Locations& loc) {
  std::vector<std::string> names;
  std::vector<int> weights;
  OrderKind kind = OrderKind::degrevlex;
  size_t order_line = sec.header;
  for (const auto& l : sec.lines) {
    if (l.text.find('=') != std::string::npos) {
      auto [k, v] = split(l, '=', "ring setting");
      if (k.text != "order") syntax("unknown ring setting '" + k.text + "'", l.no, k.col);
      try {
        kind = parse_order_kind(v.text);
      } catch (const std::invalid_argument& e) {
        syntax(e.what(), l.no, v.col);
      }
      order_line = l.no;
      continue;
    }
    auto [n, w] = split(l, ':', "variable declaration");
    identifier(n, l.no, "variable name");
    if (std::find(names.begin(), names.end(), n.text) != names.end())
      syntax("duplicate variable '" + n.text + "'", l.no, n.col);
    long wt = integer(w, l.no);
    if (wt > 0)
      semantic("positive ring weight", n.text + " has weight " + std::to_string(wt) + "; chart weights must be <= 0",
               l.no, w.col);
    names.push_back(n.text);
    weights.push_back(static_cast<int>(wt));
    loc.ring.push_back(l.no);
  }
  try {
    s.ring = GradedRing::make(names, weights, kind);
  } catch (const std::invalid_argument& e) {
    syntax(e.what(), order_line, 1);
  }
}

void parse_relations(const Section* sec, Scenario& s, Locations& loc) {
  if (!sec) return;
  for (const auto& l : sec->lines) {
    auto f = field(l, 0, l.text.size());
    s.relations.push_back(parse_polynomial(f.text, s.ring, l.no, f.col));
    loc.relations.push_back(l.no);
  }
}

void parse_lie(const Section* sec, Scenario& s, Locations& loc) {
  if (!sec) {
    s.lie = GradedLieAlgebra(std::vector<GradedLieAlgebra::Level>{});
    return;
  }
  loc.lie = sec->header;
  std::vector<GradedLieAlgebra::Level> levels;
  std::vector<std::string> seen;
  std::vector<const Line*> brackets;
  for (const auto& l : sec->lines) {
    auto f = field(l, 0, l.text.size());
    if (f.text.front() == '[') {
      brackets.push_back(&l);
      continue;
    }
    auto [n, w] = split(l, ':', "Lie basis declaration");
    identifier(n, l.no, "Lie basis name");
    if (std::find(seen.begin(), seen.end(), n.text) != seen.end())
      syntax("duplicate Lie basis name '" + n.text + "'", l.no, n.col);
    long wt = integer(w, l.no);
    if (wt <= 0) semantic("Lie weight", n.text + " has weight " + std::to_string(wt) + "; must be positive", l.no, w.col);
    seen.push_back(n.text);
    auto it = std::find_if(levels.begin(), levels.end(), [&](const auto& lv) { return lv.weight == wt; });
    if (it == levels.end()) levels.push_back({static_cast<int>(wt), {n.text}});
    else it->names.push_back(n.text);
  }
  s.lie = GradedLieAlgebra(levels);
  const auto& lie = s.lie;
  RingPtr coords = GradedRing::make(lie.names(), std::vector<int>(lie.dim(), 0));
  for (const Line* lp : brackets) {
    const Line& l = *lp;
    auto [lhs, rhs] = split(l, '=', "bracket");
    size_t close = lhs.text.find(']');
    if (close == std::string::npos || close + 1 != lhs.text.size()) syntax("expected '[a, b]'", l.no, lhs.col);
    size_t comma = lhs.text.find(',');
    if (comma == std::string::npos || comma > close) syntax("expected ',' in bracket", l.no, lhs.col);
    Line inner{l.no, std::string(lhs.col, ' ') + lhs.text.substr(1, close - 1)};
    auto a = identifier(field(inner, 0, lhs.col + comma - 1), l.no, "Lie basis name");
    auto b = identifier(field(inner, lhs.col + comma, inner.text.size()), l.no, "Lie basis name");
    auto ia = lie.index_of(a.text), ib = lie.index_of(b.text);
    if (!ia) syntax("unknown Lie basis name '" + a.text + "'", l.no, a.col);
    if (!ib) syntax("unknown Lie basis name '" + b.text + "'", l.no, b.col);
    if (loc.brackets.count({*ia, *ib})) syntax("duplicate bracket [" + a.text + ", " + b.text + "]", l.no, lhs.col);
    Polynomial v = parse_polynomial(rhs.text, coords, l.no, rhs.col);
    LieElement x = lie.zero();
    for (const auto& [e, c] : v.terms()) {
      if (total_degree(e) != 1) syntax("bracket value must be a linear combination of basis names", l.no, rhs.col);
      for (size_t k = 0; k < e.size(); ++k)
        if (e[k]) x[k] = c;
    }
    int target = lie.weight_of(*ia) + lie.weight_of(*ib);
    for (size_t k = 0; k < lie.dim(); ++k)
      if (x[k] != 0 && lie.weight_of(k) != target)
        semantic("bracket weight", "[" + a.text + ", " + b.text + "] has component " + lie.name(k) + " of weight " +
                                       std::to_string(lie.weight_of(k)) + ", expected " + std::to_string(target),
                 l.no, rhs.col);
    s.lie.set_bracket(*ia, *ib, x);
    loc.brackets[{*ia, *ib}] = l.no;
  }
  for (const auto& v : s.lie.validate()) semantic(v.kind, v.witness, loc.lie);
}

void parse_action(const Section* sec, Scenario& s, Locations& loc) {
  const auto& R = *s.ring;
  s.table.assign(s.lie.dim(), std::vector<Polynomial>(R.nvars(), Polynomial(s.ring)));
  if (!sec) return;
  loc.action_header = sec->header;
  for (const auto& l : sec->lines) {
    auto [lhs, rhs] = split(l, '=', "action entry");
    size_t dot = lhs.text.find('.');
    if (dot == std::string::npos) syntax("expected 'xi.var' on the left", l.no, lhs.col);
    Line inner{l.no, std::string(lhs.col - 1, ' ') + lhs.text};
    auto xi = identifier(field(inner, 0, lhs.col - 1 + dot), l.no, "Lie basis name");
    auto g = identifier(field(inner, lhs.col + dot, inner.text.size()), l.no, "variable name");
    auto j = s.lie.index_of(xi.text);
    auto v = R.index_of(g.text);
    if (!j) syntax("unknown Lie basis name '" + xi.text + "'", l.no, xi.col);
    if (!v) syntax("unknown variable '" + g.text + "'", l.no, g.col);
    if (loc.action.count({*j, *v})) syntax("duplicate action entry " + xi.text + "." + g.text, l.no, lhs.col);
    Polynomial im = parse_polynomial(rhs.text, s.ring, l.no, rhs.col);
    int expected = R.weight(*v) + s.lie.weight_of(*j);
    if (!im.is_zero() && (!im.is_homogeneous() || im.min_weight() != expected))
      semantic("weight", xi.text + " . " + g.text + " = " + im.to_string() + " has weight " +
                             (im.is_homogeneous() ? std::to_string(im.min_weight()) : std::string("mixed")) +
                             ", expected " + std::to_string(expected) + " (wt " + g.text + " = " +
                             std::to_string(R.weight(*v)) + ", wt " + xi.text + " = " +
                             std::to_string(s.lie.weight_of(*j)) + ")",
               l.no, rhs.col);
    s.table[*j][*v] = im;
    loc.action[{*j, *v}] = l.no;
  }
}

void parse_options(const Section* sec, Scenario& s) {
  if (!sec) return;
  auto& o = s.options;
  for (const auto& l : sec->lines) {
    auto [k, v] = split(l, '=', "option");
    if (k.text == "degree_bound") o.degree_bound = static_cast<int>(integer(v, l.no));
    else if (k.text == "pbw_bound") o.pbw_bound = static_cast<int>(integer(v, l.no));
    else if (k.text == "reduced") o.reduced = boolean(v, l.no);
    else if (k.text == "sample_count") o.sample_count = static_cast<size_t>(integer(v, l.no));
    else if (k.text == "seed") o.seed = static_cast<uint64_t>(integer(v, l.no));
    else syntax("unknown option '" + k.text + "'", l.no, k.col);
    if ((k.text == "degree_bound" || k.text == "pbw_bound" || k.text == "sample_count" || k.text == "seed") &&
        integer(v, l.no) < 0)
      syntax(k.text + " must be nonnegative", l.no, v.col);
  }
}

void check_semantics(const Scenario& s, const Locations& loc) {
  DerivationAction act = s.action();
  const auto& A = act.algebra();
  const auto& R = *s.ring;
  const auto& lie = s.lie;
  if (!A.relations_homogeneous()) {
    for (size_t r = 0; r < s.relations.size(); ++r)
      if (!s.relations[r].is_homogeneous())
        semantic("inhomogeneous relations", s.relations[r].to_string() + " is not weight-homogeneous",
                 loc.relations[r]);
    semantic("inhomogeneous relations", "relations ideal is not graded", loc.relations.empty() ? 1 : loc.relations[0]);
  }
  for (size_t r = 0; r < s.relations.size(); ++r)
    for (size_t j = 0; j < lie.dim(); ++j) {
      Polynomial d = act.apply(j, s.relations[r]);
      if (!d.is_zero())
        semantic("relation not preserved", lie.name(j) + " . (" + s.relations[r].to_string() + ") = " + d.to_string(),
                 loc.relations[r]);
    }
  for (size_t a = 0; a < lie.dim(); ++a)
    for (size_t b = a + 1; b < lie.dim(); ++b) {
      auto br = act.images_of(lie.bracket(a, b));
      for (size_t g = 0; g < R.nvars(); ++g) {
        Polynomial lhs = act.apply(a, act.image(b, g)) - act.apply(b, act.image(a, g));
        if (A.equal(lhs, br[g])) continue;
        size_t line = loc.action_header;
        if (auto it = loc.brackets.find({a, b}); it != loc.brackets.end()) line = it->second;
        else if (auto it2 = loc.brackets.find({b, a}); it2 != loc.brackets.end()) line = it2->second;
        semantic("bracket compatibility", "[" + lie.name(a) + ", " + lie.name(b) + "] on " + R.name(g) +
                                              ": commutator gives " + A.reduce(lhs).to_string() +
                                              ", bracket gives " + br[g].to_string(),
                 line);
      }
    }
  for (const auto& v : act.validate()) semantic(v.kind, v.witness, loc.action_header);
}

}  // namespace

DerivationAction Scenario::action() const { return DerivationAction(PresentedAlgebra(ring, relations), lie, table); }

bool Scenario::operator==(const Scenario& o) const {
  if (!ring->same_as(*o.ring) || ring->kind() != o.ring->kind()) return false;
  if (relations != o.relations || table != o.table || !(options == o.options)) return false;
  if (lie.names() != o.lie.names() || lie.nlevels() != o.lie.nlevels()) return false;
  for (size_t i = 0; i < lie.nlevels(); ++i)
    if (lie.level_weight(i) != o.lie.level_weight(i)) return false;
  for (size_t a = 0; a < lie.dim(); ++a)
    for (size_t b = 0; b < lie.dim(); ++b)
      if (lie.bracket(a, b) != o.lie.bracket(a, b) || lie.bracket_explicit(a, b) != o.lie.bracket_explicit(a, b))
        return false;
  return true;
}

Scenario parse_scenario(const std::string& text) {
  auto sections = split_sections(text);
  auto get = [&](const std::string& n) -> const Section* {
    auto it = sections.find(n);
    return it == sections.end() ? nullptr : &it->second;
  };
  Scenario s;
  Locations loc;
  parse_ring(sections.at("ring"), s, loc);
  parse_relations(get("relations"), s, loc);
  parse_lie(get("lie"), s, loc);
  parse_action(get("action"), s, loc);
  parse_options(get("options"), s);
  check_semantics(s, loc);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  const auto& R = *s.ring;
  out << "[ring]\norder = " << to_string(R.kind()) << "\n";
  for (size_t g = 0; g < R.nvars(); ++g) out << R.name(g) << " : " << R.weight(g) << "\n";
  out << "\n[relations]\n";
  for (const auto& r : s.relations) out << r.to_string() << "\n";
  out << "\n[lie]\n";
  for (size_t j = 0; j < s.lie.dim(); ++j) out << s.lie.name(j) << " : " << s.lie.weight_of(j) << "\n";
  for (size_t a = 0; a < s.lie.dim(); ++a)
    for (size_t b = 0; b < s.lie.dim(); ++b)
      if (s.lie.bracket_explicit(a, b))
        out << "[" << s.lie.name(a) << ", " << s.lie.name(b) << "] = " << s.lie.format(s.lie.bracket(a, b)) << "\n";
  out << "\n[action]\n";
  for (size_t j = 0; j < s.table.size(); ++j)
    for (size_t g = 0; g < R.nvars(); ++g)
      if (!s.table[j][g].is_zero()) out << s.lie.name(j) << "." << R.name(g) << " = " << s.table[j][g] << "\n";
  const auto& o = s.options;
  out << "\n[options]\ndegree_bound = " << o.degree_bound << "\npbw_bound = " << o.pbw_bound
      << "\nreduced = " << (o.reduced ? "true" : "false") << "\nsample_count = " << o.sample_count
      << "\nseed = " << o.seed << "\n";
  return out.str();
}

}  // namespace nrgit
