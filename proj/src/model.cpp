#include "igl/model.hpp"

#include <algorithm>
#include <sstream>

namespace igl {

// ---------------------------------------------------------------------------
// RelMat

RelMat::RelMat(int n) : n_(n), rows_(static_cast<std::size_t>(n), 0) {}

bool RelMat::at(int i, int j) const {
  return (rows_[static_cast<std::size_t>(i)] >> j) & 1u;
}

void RelMat::set(int i, int j, bool value) {
  if (value)
    rows_[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
  else
    rows_[static_cast<std::size_t>(i)] &= ~(std::uint64_t{1} << j);
}

std::uint64_t RelMat::row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

void RelMat::or_into_row(int i, std::uint64_t bits) { rows_[static_cast<std::size_t>(i)] |= bits; }

bool RelMat::subset_of(const RelMat& other) const {
  for (int i = 0; i < n_; ++i) {
    if (row(i) & ~other.row(i)) return false;
  }
  return true;
}

bool RelMat::any() const {
  for (int i = 0; i < n_; ++i) {
    if (row(i)) return true;
  }
  return false;
}

RelMat RelMat::transposed() const {
  RelMat out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (at(i, j)) out.set(j, i);
    }
  }
  return out;
}

RelMat RelMat::composed_with(const RelMat& other) const {
  RelMat out(n_);
  for (int i = 0; i < n_; ++i) {
    std::uint64_t acc = 0;
    std::uint64_t mids = row(i);
    for (int k = 0; k < n_; ++k) {
      if ((mids >> k) & 1u) acc |= other.row(k);
    }
    out.or_into_row(i, acc);
  }
  return out;
}

RelMat RelMat::identity(int n) {
  RelMat out(n);
  for (int i = 0; i < n; ++i) out.set(i, i);
  return out;
}

void RelMat::close_reflexive() {
  for (int i = 0; i < n_; ++i) set(i, i);
}

void RelMat::close_transitive() {
  for (int k = 0; k < n_; ++k) {
    for (int i = 0; i < n_; ++i) {
      if (at(i, k)) rows_[static_cast<std::size_t>(i)] |= row(k);
    }
  }
}

bool RelMat::reflexive() const {
  for (int i = 0; i < n_; ++i) {
    if (!at(i, i)) return false;
  }
  return true;
}

bool RelMat::transitive() const {
  for (int i = 0; i < n_; ++i) {
    std::uint64_t reach = row(i);
    for (int k = 0; k < n_; ++k) {
      if ((reach >> k) & 1u) {
        if (row(k) & ~reach) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Grammar pieces

std::string Production::text() const {
  std::string out = lhs.text() + " ->";
  for (const auto& x : rhs) out += " " + x.text();
  return out;
}

void require_declared(const Alphabet& alphabet, const GrammarSpec& g) {
  for (const auto& x : g.serial) {
    if (!alphabet.contains(x)) throw InputError("undeclared character '" + x.text() + "' in serial set");
  }
  for (const auto& p : g.productions) {
    if (!alphabet.contains(p.lhs))
      throw InputError("undeclared character '" + p.lhs.text() + "' in production " + p.text());
    for (const auto& x : p.rhs) {
      if (!alphabet.contains(x))
        throw InputError("undeclared character '" + x.text() + "' in production " + p.text());
    }
  }
}

// ---------------------------------------------------------------------------
// Model

namespace {

bool is_world_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool is_atom_token(const std::string& s) {
  if (s.empty() || s == "false") return false;
  if (!(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Model::Model(Alphabet alphabet, std::vector<std::string> worlds)
    : alphabet_(std::move(alphabet)), worlds_(std::move(worlds)) {
  if (worlds_.empty()) throw InputError("a model needs at least one world");
  if (worlds_.size() > 64) throw InputError("models are capped at 64 worlds");
  for (int i = 0; i < size(); ++i) {
    const auto& w = worlds_[static_cast<std::size_t>(i)];
    if (!is_world_token(w)) throw InputError("bad world id '" + w + "'");
    if (!index_.emplace(w, i).second) throw InputError("duplicate world id '" + w + "'");
  }
  leq_ = RelMat(size());
  val_.resize(worlds_.size());
}

int Model::index_of(const std::string& world) const {
  auto it = index_.find(world);
  if (it == index_.end()) throw InputError("unknown world '" + world + "'");
  return it->second;
}

bool Model::has_world(const std::string& world) const { return index_.count(world) != 0; }

void Model::add_leq(const std::string& from, const std::string& to) {
  leq_.set(index_of(from), index_of(to));
}

void Model::add_edge(const Character& x, const std::string& from, const std::string& to) {
  if (!alphabet_.contains(x)) throw InputError("undeclared character '" + x.text() + "'");
  int i = index_of(from);
  int j = index_of(to);
  auto it = rel_.try_emplace(x.base, RelMat(size())).first;
  if (x.polarity == Polarity::Forward)
    it->second.set(i, j);
  else
    it->second.set(j, i);
}

void Model::add_atom(const std::string& world, const std::string& atom) {
  if (!is_atom_token(atom)) throw InputError("bad atom name '" + atom + "'");
  val_[static_cast<std::size_t>(index_of(world))].insert(atom);
}

void Model::set_leq_matrix(RelMat m) {
  if (m.size() != size()) throw Error("leq matrix size mismatch");
  leq_ = std::move(m);
}

bool Model::edge(const Character& x, int i, int j) const {
  return (edge_row(x, i) >> j) & 1u;
}

std::uint64_t Model::edge_row(const Character& x, int i) const {
  if (!alphabet_.contains(x)) throw InputError("undeclared character '" + x.text() + "'");
  auto it = rel_.find(x.base);
  if (it == rel_.end()) return 0;
  if (x.polarity == Polarity::Forward) return it->second.row(i);
  std::uint64_t out = 0;
  for (int j = 0; j < size(); ++j) {
    if (it->second.at(j, i)) out |= std::uint64_t{1} << j;
  }
  return out;
}

RelMat Model::edge_matrix(const Character& x) const {
  if (!alphabet_.contains(x)) throw InputError("undeclared character '" + x.text() + "'");
  auto it = rel_.find(x.base);
  if (it == rel_.end()) return RelMat(size());
  return x.polarity == Polarity::Forward ? it->second : it->second.transposed();
}

void Model::set_edge_matrix(const std::string& forward_base, RelMat m) {
  if (!alphabet_.contains_base(forward_base))
    throw InputError("undeclared character '" + forward_base + "'");
  if (m.size() != size()) throw Error("edge matrix size mismatch");
  rel_[forward_base] = std::move(m);
}

std::vector<std::string> Model::stored_bases() const {
  std::vector<std::string> out;
  for (const auto& [base, mat] : rel_) {
    if (mat.any()) out.push_back(base);
  }
  return out;
}

const std::set<std::string>& Model::atoms_at(int i) const {
  return val_[static_cast<std::size_t>(i)];
}

bool Model::atom_at(int i, const std::string& atom) const {
  return val_[static_cast<std::size_t>(i)].count(atom) != 0;
}

std::uint64_t Model::atom_mask(const std::string& atom) const {
  std::uint64_t out = 0;
  for (int i = 0; i < size(); ++i) {
    if (atom_at(i, atom)) out |= std::uint64_t{1} << i;
  }
  return out;
}

std::set<std::string> Model::atom_universe() const {
  std::set<std::string> out;
  for (const auto& atoms : val_) out.insert(atoms.begin(), atoms.end());
  return out;
}

namespace {

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet matrix_pairs(const Model& m, const RelMat& mat) {
  PairSet out;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (mat.at(i, j)) out.emplace(m.world_name(i), m.world_name(j));
    }
  }
  return out;
}

}  // namespace

bool Model::operator==(const Model& other) const {
  std::set<std::string> ws(worlds_.begin(), worlds_.end());
  std::set<std::string> wo(other.worlds_.begin(), other.worlds_.end());
  if (ws != wo) return false;
  if (matrix_pairs(*this, leq_) != matrix_pairs(other, other.leq_)) return false;
  std::set<std::string> bases;
  for (const auto& [base, mat] : rel_) bases.insert(base);
  for (const auto& [base, mat] : other.rel_) bases.insert(base);
  for (const auto& base : bases) {
    auto lhs = rel_.find(base);
    auto rhs = other.rel_.find(base);
    PairSet lp = lhs == rel_.end() ? PairSet{} : matrix_pairs(*this, lhs->second);
    PairSet rp = rhs == other.rel_.end() ? PairSet{} : matrix_pairs(other, rhs->second);
    if (lp != rp) return false;
  }
  for (const auto& w : worlds_) {
    if (atoms_at(index_of(w)) != other.atoms_at(other.index_of(w))) return false;
  }
  return true;
}

std::set<std::pair<std::string, std::string>> edge_lookup(const Model& m, const Character& x) {
  PairSet out;
  for (int i = 0; i < m.size(); ++i) {
    std::uint64_t succ = m.edge_row(x, i);
    for (int j = 0; j < m.size(); ++j) {
      if ((succ >> j) & 1u) out.emplace(m.world_name(i), m.world_name(j));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Saturation

Model saturate(Model m, const GrammarSpec& g) {
  require_declared(m.alphabet(), g);
  int n = m.size();

  RelMat leq = m.leq_matrix();
  leq.close_reflexive();
  leq.close_transitive();
  m.set_leq_matrix(std::move(leq));

  // One pass is enough for the valuation once leq is closed.
  for (const auto& atom : m.atom_universe()) {
    std::uint64_t holds = m.atom_mask(atom);
    std::uint64_t grown = holds;
    for (int i = 0; i < n; ++i) {
      if ((holds >> i) & 1u) grown |= m.leq_row(i);
    }
    for (int j = 0; j < n; ++j) {
      if (((grown & ~holds) >> j) & 1u) m.add_atom(m.world_name(j), atom);
    }
  }

  // Productions can feed each other, so iterate to the fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      RelMat comp = RelMat::identity(n);
      for (const auto& x : p.rhs) comp = comp.composed_with(m.edge_matrix(x));
      if (comp.subset_of(m.edge_matrix(p.lhs))) continue;
      changed = true;
      RelMat add = p.lhs.polarity == Polarity::Forward ? comp : comp.transposed();
      RelMat base = m.edge_matrix(forward_char(p.lhs.base));
      for (int i = 0; i < n; ++i) base.or_into_row(i, add.row(i));
      m.set_edge_matrix(p.lhs.base, std::move(base));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Audit

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::PreorderReflexive:
      return "preorder-reflexive";
    case Violation::Kind::PreorderTransitive:
      return "preorder-transitive";
    case Violation::Kind::MonotoneValuation:
      return "monotone-valuation";
    case Violation::Kind::F1:
      return "F1";
    case Violation::Kind::F2:
      return "F2";
    case Violation::Kind::Seriality:
      return "seriality";
    case Violation::Kind::Path:
      return "path";
  }
  return "?";
}

std::string Violation::describe() const {
  std::string out = to_string(kind);
  if (character) out += " (character " + character->text() + ")";
  if (production) out += " (production " + production->text() + ")";
  out += ":";
  for (const auto& w : witnesses) out += " " + w;
  return out;
}

namespace {

// Rebuilds one composition chain i -> ... -> j along the production body.
bool find_chain(const Model& m, const std::vector<Character>& rhs, std::size_t idx, int cur,
                int target, std::vector<int>& path) {
  if (idx == rhs.size()) return cur == target;
  std::uint64_t succ = m.edge_row(rhs[idx], cur);
  for (int next = 0; next < m.size(); ++next) {
    if (!((succ >> next) & 1u)) continue;
    path.push_back(next);
    if (find_chain(m, rhs, idx + 1, next, target, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

AuditReport audit(const Model& m, const GrammarSpec& g) {
  require_declared(m.alphabet(), g);
  AuditReport report;
  int n = m.size();
  auto name = [&](int i) { return m.world_name(i); };

  for (int w = 0; w < n; ++w) {
    if (!m.leq(w, w))
      report.violations.push_back(
          {Violation::Kind::PreorderReflexive, std::nullopt, std::nullopt, {name(w)}});
  }
  for (int w = 0; w < n; ++w) {
    for (int u = 0; u < n; ++u) {
      if (!m.leq(w, u)) continue;
      for (int v = 0; v < n; ++v) {
        if (m.leq(u, v) && !m.leq(w, v))
          report.violations.push_back({Violation::Kind::PreorderTransitive,
                                       std::nullopt,
                                       std::nullopt,
                                       {name(w), name(u), name(v)}});
      }
    }
  }
  for (int w = 0; w < n; ++w) {
    for (int u = 0; u < n; ++u) {
      if (w == u || !m.leq(w, u)) continue;
      for (const auto& atom : m.atoms_at(w)) {
        if (!m.atom_at(u, atom))
          report.violations.push_back({Violation::Kind::MonotoneValuation,
                                       std::nullopt,
                                       std::nullopt,
                                       {name(w), name(u), atom}});
      }
    }
  }

  for (const auto& x : m.alphabet().characters()) {
    // F1: w R_x v and v <= v1 need some w1 with w <= w1 and w1 R_x v1.
    for (int w = 0; w < n; ++w) {
      std::uint64_t succ = m.edge_row(x, w);
      for (int v = 0; v < n; ++v) {
        if (!((succ >> v) & 1u)) continue;
        for (int v1 = 0; v1 < n; ++v1) {
          if (!m.leq(v, v1)) continue;
          // Worlds with an x-edge into v1 are the converse successors of v1.
          if ((m.leq_row(w) & m.edge_row(converse(x), v1)) == 0)
            report.violations.push_back(
                {Violation::Kind::F1, x, std::nullopt, {name(w), name(v), name(v1)}});
        }
      }
    }
    // F2: w <= w1 and w R_x v need some v1 with w1 R_x v1 and v <= v1.
    for (int w = 0; w < n; ++w) {
      std::uint64_t succ = m.edge_row(x, w);
      for (int w1 = 0; w1 < n; ++w1) {
        if (!m.leq(w, w1)) continue;
        for (int v = 0; v < n; ++v) {
          if (!((succ >> v) & 1u)) continue;
          if ((m.edge_row(x, w1) & m.leq_row(v)) == 0)
            report.violations.push_back(
                {Violation::Kind::F2, x, std::nullopt, {name(w), name(w1), name(v)}});
        }
      }
    }
  }

  for (const auto& x : g.serial) {
    for (int w = 0; w < n; ++w) {
      if (m.edge_row(x, w) == 0)
        report.violations.push_back({Violation::Kind::Seriality, x, std::nullopt, {name(w)}});
    }
  }

  for (const auto& p : g.productions) {
    RelMat comp = RelMat::identity(n);
    for (const auto& x : p.rhs) comp = comp.composed_with(m.edge_matrix(x));
    RelMat target = m.edge_matrix(p.lhs);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!comp.at(i, j) || target.at(i, j)) continue;
        std::vector<int> path{i};
        find_chain(m, p.rhs, 0, i, j, path);
        std::vector<std::string> witness;
        for (int k : path) witness.push_back(name(k));
        report.violations.push_back({Violation::Kind::Path, std::nullopt, p, std::move(witness)});
      }
    }
  }

  return report;
}

bool is_birelational(const Model& m, const GrammarSpec& g) { return audit(m, g).ok(); }

// ---------------------------------------------------------------------------
// Text formats

namespace {

struct Line {
  int number = 0;
  std::string text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view raw =
        end == std::string_view::npos ? text.substr(pos) : text.substr(pos, end - pos);
    ++number;
    std::string line(raw.substr(0, raw.find('#')));
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      auto last = line.find_last_not_of(" \t\r");
      out.push_back({number, line.substr(first, last - first + 1)});
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void line_fail(int number, const std::string& message) {
  throw InputError("line " + std::to_string(number) + ": " + message);
}

Character parse_character_token(int number, const std::string& tok) {
  std::string base = tok;
  bool backward = false;
  if (!base.empty() && base.back() == '-') {
    backward = true;
    base.pop_back();
  }
  if (base.empty() || !(base[0] >= 'a' && base[0] <= 'z'))
    line_fail(number, "bad character token '" + tok + "'");
  for (char c : base) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) line_fail(number, "bad character token '" + tok + "'");
  }
  return backward ? backward_char(base) : forward_char(base);
}

// Comma-separated groups of exactly two world tokens; empty payload is fine.
std::vector<std::pair<std::string, std::string>> parse_pairs(int number, const std::string& payload) {
  std::vector<std::pair<std::string, std::string>> out;
  if (split_tokens(payload).empty()) return out;
  std::size_t pos = 0;
  while (pos <= payload.size()) {
    std::size_t end = payload.find(',', pos);
    std::string group =
        end == std::string::npos ? payload.substr(pos) : payload.substr(pos, end - pos);
    auto toks = split_tokens(group);
    if (toks.size() != 2) line_fail(number, "expected 'from to' pairs separated by commas");
    out.emplace_back(toks[0], toks[1]);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return out;
}

Model parse_model_impl(std::string_view text, const Alphabet* alphabet) {
  auto lines = content_lines(text);

  std::vector<std::string> worlds;
  for (const auto& line : lines) {
    if (line.text.rfind("worlds:", 0) == 0) {
      for (const auto& tok : split_tokens(line.text.substr(7))) {
        if (std::find(worlds.begin(), worlds.end(), tok) != worlds.end())
          line_fail(line.number, "duplicate world id '" + tok + "'");
        worlds.push_back(tok);
      }
    }
  }
  if (worlds.empty()) throw InputError("model text declares no worlds");

  // Without a declared alphabet the rel lines define it.
  std::set<std::string> bases;
  for (const auto& line : lines) {
    if (line.text.rfind("rel ", 0) == 0 || line.text.rfind("rel\t", 0) == 0) {
      auto colon = line.text.find(':');
      if (colon == std::string::npos) line_fail(line.number, "missing ':' in rel line");
      auto toks = split_tokens(line.text.substr(4, colon - 4));
      if (toks.size() != 1) line_fail(line.number, "expected one character before ':'");
      Character x = parse_character_token(line.number, toks[0]);
      if (x.polarity == Polarity::Backward)
        line_fail(line.number,
                  "backward character in rel line; write the reversed forward pairs instead");
      bases.insert(x.base);
    }
  }
  Alphabet effective = alphabet ? *alphabet
                                : Alphabet(bases.empty() ? std::set<std::string>{"a"} : bases);

  Model m(effective, worlds);

  for (const auto& line : lines) {
    if (line.text.rfind("worlds:", 0) == 0) continue;
    try {
      if (line.text.rfind("leq:", 0) == 0) {
        for (const auto& [from, to] : parse_pairs(line.number, line.text.substr(4)))
          m.add_leq(from, to);
      } else if (line.text.rfind("rel ", 0) == 0 || line.text.rfind("rel\t", 0) == 0) {
        auto colon = line.text.find(':');
        auto toks = split_tokens(line.text.substr(4, colon - 4));
        Character x = parse_character_token(line.number, toks[0]);
        if (!effective.contains(x))
          line_fail(line.number, "undeclared character '" + x.text() + "'");
        // Declare the base even when the pair list is empty.
        m.set_edge_matrix(x.base, m.edge_matrix(forward_char(x.base)));
        for (const auto& [from, to] : parse_pairs(line.number, line.text.substr(colon + 1)))
          m.add_edge(x, from, to);
      } else if (line.text.rfind("val ", 0) == 0 || line.text.rfind("val\t", 0) == 0) {
        auto colon = line.text.find(':');
        if (colon == std::string::npos) line_fail(line.number, "missing ':' in val line");
        auto heads = split_tokens(line.text.substr(4, colon - 4));
        if (heads.size() != 1) line_fail(line.number, "expected one world before ':'");
        for (const auto& atom : split_tokens(line.text.substr(colon + 1)))
          m.add_atom(heads[0], atom);
      } else {
        line_fail(line.number, "unrecognized line '" + line.text + "'");
      }
    } catch (const InputError& e) {
      std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      line_fail(line.number, what);
    }
  }
  return m;
}

}  // namespace

Model parse_model(std::string_view text) { return parse_model_impl(text, nullptr); }

Model parse_model(std::string_view text, const Alphabet& alphabet) {
  return parse_model_impl(text, &alphabet);
}

std::string print_model(const Model& m) {
  std::string out = "worlds:";
  for (const auto& w : m.worlds()) out += " " + w;
  out += "\n";

  std::string leq;
  bool first = true;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (!m.leq(i, j)) continue;
      leq += first ? " " : ", ";
      leq += m.world_name(i) + " " + m.world_name(j);
      first = false;
    }
  }
  if (!first) out += "leq:" + leq + "\n";

  // Every declared base gets a rel line, so the printed text carries the
  // whole alphabet and reloads without a separate declaration.
  for (const auto& base : m.alphabet().forward_names()) {
    out += "rel " + base + ":";
    first = true;
    Character x = forward_char(base);
    for (int i = 0; i < m.size(); ++i) {
      std::uint64_t succ = m.edge_row(x, i);
      for (int j = 0; j < m.size(); ++j) {
        if (!((succ >> j) & 1u)) continue;
        out += first ? " " : ", ";
        out += m.world_name(i) + " " + m.world_name(j);
        first = false;
      }
    }
    out += "\n";
  }

  for (int i = 0; i < m.size(); ++i) {
    if (m.atoms_at(i).empty()) continue;
    out += "val " + m.world_name(i) + ":";
    for (const auto& atom : m.atoms_at(i)) out += " " + atom;
    out += "\n";
  }
  return out;
}

GrammarFile parse_grammar_file(std::string_view text) {
  auto lines = content_lines(text);

  std::set<std::string> names;
  for (const auto& line : lines) {
    if (line.text.rfind("alphabet:", 0) == 0) {
      for (const auto& tok : split_tokens(line.text.substr(9))) {
        Character x = parse_character_token(line.number, tok);
        if (x.polarity == Polarity::Backward)
          line_fail(line.number, "alphabet lines declare forward names only");
        names.insert(x.base);
      }
    }
  }
  if (names.empty()) throw InputError("grammar text declares no alphabet");
  Alphabet alphabet(names);

  GrammarSpec g;
  for (const auto& line : lines) {
    if (line.text.rfind("alphabet:", 0) == 0) continue;
    if (line.text.rfind("serial:", 0) == 0) {
      for (const auto& tok : split_tokens(line.text.substr(7))) {
        Character x = parse_character_token(line.number, tok);
        if (!alphabet.contains(x)) line_fail(line.number, "undeclared character '" + x.text() + "'");
        g.serial.insert(x);
      }
    } else if (line.text.rfind("prod ", 0) == 0 || line.text.rfind("prod\t", 0) == 0) {
      auto toks = split_tokens(line.text.substr(5));
      auto arrow = std::find(toks.begin(), toks.end(), "->");
      if (arrow == toks.end() || arrow != toks.begin() + 1)
        line_fail(line.number, "expected 'prod <char> -> <chars...>'");
      Production p;
      p.lhs = parse_character_token(line.number, toks[0]);
      for (auto it = arrow + 1; it != toks.end(); ++it)
        p.rhs.push_back(parse_character_token(line.number, *it));
      if (!alphabet.contains(p.lhs))
        line_fail(line.number, "undeclared character '" + p.lhs.text() + "'");
      for (const auto& x : p.rhs) {
        if (!alphabet.contains(x)) line_fail(line.number, "undeclared character '" + x.text() + "'");
      }
      g.productions.push_back(std::move(p));
    } else {
      line_fail(line.number, "unrecognized line '" + line.text + "'");
    }
  }
  return {std::move(alphabet), std::move(g)};
}

std::string print_grammar_file(const GrammarFile& g) {
  std::string out = "alphabet:";
  for (const auto& name : g.alphabet.forward_names()) out += " " + name;
  out += "\n";
  if (!g.grammar.serial.empty()) {
    out += "serial:";
    for (const auto& x : g.grammar.serial) out += " " + x.text();
    out += "\n";
  }
  for (const auto& p : g.grammar.productions) out += "prod " + p.text() + "\n";
  return out;
}

}  // namespace igl
