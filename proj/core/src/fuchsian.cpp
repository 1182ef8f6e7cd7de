#include "relcount/fuchsian.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "relcount/errors.hpp"
#include "relcount/parallel.hpp"

namespace relcount {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr double kZeroTol = 1e-12;
constexpr double kFloorFuzz = 1e-9;

// Set of elements with tolerance-aware lookup. Keys bucket asinh of the two
// top entries; asinh is 1-Lipschitz and flattens growth, so a relative
// tolerance on the entries stays within one bucket.
class ElementSet {
 public:
  std::size_t size() const { return items_.size(); }
  const MoebiusElement& operator[](std::size_t i) const { return items_[i]; }

  std::optional<std::size_t> find(const MoebiusElement& g) const {
    const auto [ka, kb] = keys(g);
    for (std::int64_t da = -1; da <= 1; ++da) {
      for (std::int64_t db = -1; db <= 1; ++db) {
        auto it = buckets_.find(pack(ka + da, kb + db));
        if (it == buckets_.end()) continue;
        for (std::size_t idx : it->second) {
          if (items_[idx].approx_equal(g, kDedupTol)) return idx;
        }
      }
    }
    return std::nullopt;
  }

  // Returns the index and whether the element was new.
  std::pair<std::size_t, bool> insert(const MoebiusElement& g) {
    if (auto idx = find(g)) return {*idx, false};
    const auto [ka, kb] = keys(g);
    buckets_[pack(ka, kb)].push_back(items_.size());
    items_.push_back(g);
    return {items_.size() - 1, true};
  }

 private:
  static std::pair<std::int64_t, std::int64_t> keys(const MoebiusElement& g) {
    return {static_cast<std::int64_t>(std::llround(std::asinh(g.a()) * 1e7)),
            static_cast<std::int64_t>(std::llround(std::asinh(g.b()) * 1e7))};
  }
  static std::uint64_t pack(std::int64_t a, std::int64_t b) {
    return static_cast<std::uint64_t>(a) * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(b);
  }

  std::vector<MoebiusElement> items_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

double cosh_displacement(const MoebiusElement& g, const Point& p) {
  return 1.0 + 2.0 * point_pair_invariant(p, apply(g, p));
}

std::vector<MoebiusElement> alphabet(const GroupPresentation& pres) {
  std::vector<MoebiusElement> out;
  for (const auto& g : pres.generators) {
    out.push_back(g);
    out.push_back(g.inverse());
  }
  return out;
}

struct BfsResult {
  ElementSet set;
  std::vector<int> word_length;
  std::vector<std::size_t> shell_sizes;
  bool saturated = false;
};

// Breadth-first search over words; on_shell sees each new shell in order.
template <class OnShell>
BfsResult bfs(const GroupPresentation& pres, int max_word_len, double cosh_cap,
              std::size_t max_elements, OnShell&& on_shell) {
  if (max_word_len < 0) throw Error(ErrorCode::kInvalidArgument, "max_word_len must be >= 0");
  BfsResult r;
  r.set.insert(MoebiusElement::identity());
  r.word_length.push_back(0);
  r.shell_sizes.push_back(1);
  std::vector<MoebiusElement> frontier{MoebiusElement::identity()};
  on_shell(0, frontier);
  const auto letters = alphabet(pres);
  const Point p = pres.base_point;

  for (int level = 1; level <= max_word_len; ++level) {
    std::vector<std::vector<MoebiusElement>> per_chunk;
    std::mutex mu;
    parallel_chunks(frontier.size(), [&](std::size_t lo, std::size_t hi) {
      std::vector<MoebiusElement> local;
      for (std::size_t i = lo; i < hi; ++i) {
        for (const auto& s : letters) {
          MoebiusElement c = frontier[i] * s;
          if (std::isfinite(cosh_cap) && cosh_displacement(c, p) > cosh_cap) continue;
          if (r.set.find(c)) continue;
          local.push_back(c);
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      per_chunk.push_back(std::move(local));
    });
    // Chunk completion order varies; restore a deterministic order.
    std::vector<MoebiusElement> candidates;
    for (auto& v : per_chunk) candidates.insert(candidates.end(), v.begin(), v.end());
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      if (x.a() != y.a()) return x.a() < y.a();
      if (x.b() != y.b()) return x.b() < y.b();
      if (x.c() != y.c()) return x.c() < y.c();
      return x.d() < y.d();
    });
    std::vector<MoebiusElement> fresh;
    for (const auto& c : candidates) {
      if (r.set.insert(c).second) {
        r.word_length.push_back(level);
        fresh.push_back(c);
        if (r.set.size() > max_elements) {
          throw Error(ErrorCode::kExplosionGuard,
                      "ball exceeded " + std::to_string(max_elements) + " elements at word length " +
                          std::to_string(level));
        }
      }
    }
    r.shell_sizes.push_back(fresh.size());
    on_shell(level, fresh);
    frontier = std::move(fresh);
    if (frontier.empty()) {
      r.saturated = true;
      break;
    }
  }
  return r;
}

double parse_double(const std::string& tok, const std::string& where) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, where + ": expected a number, got '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Inventory build_inventory(const GroupPresentation& walk, double m_left, double m_right,
                          const MoebiusElement& tau_inv, double X, int max_word_len,
                          double cosh_cap, const InventoryOptions& opt) {
  if (!(X > 1.0)) throw Error(ErrorCode::kInvalidArgument, "inventory requires X > 1");
  Inventory inv;
  inv.x_cover = X;
  ElementSet keys;
  auto on_shell = [&](int level, const std::vector<MoebiusElement>& fresh) {
    std::size_t added = 0;
    for (const auto& g : fresh) {
      CosetRepresentative rep;
      try {
        rep = reduce_double_coset(m_left, m_right, tau_inv * g, level);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kDiagonalZeroEntry || e.code() == ErrorCode::kDegenerateEntries) {
          ++inv.diagonal_rejects;
          continue;
        }
        throw;
      }
      if (rep.klass == CosetClass::kRegular && !(rep.b_value < X)) continue;
      if (keys.insert(rep.element).second) {
        inv.reps.push_back(rep);
        ++added;
      }
    }
    inv.new_reps_per_shell.push_back(added);
    inv.word_depth = level;
  };
  BfsResult r = bfs(walk, max_word_len, cosh_cap, opt.max_elements, on_shell);
  inv.ball_size = r.set.size();
  inv.saturated = r.saturated;
  inv.stable = inv.saturated || (inv.word_depth >= 1 && inv.new_reps_per_shell.back() == 0);
  for (const auto& rep : inv.reps) inv.torsion_suspected += rep.torsion_suspected ? 1 : 0;
  std::stable_sort(inv.reps.begin(), inv.reps.end(),
                   [](const auto& x, const auto& y) { return x.b_value < y.b_value; });
  return inv;
}

}  // namespace

double GroupPresentation::length() const { return 2.0 * std::log(m); }

double GroupPresentation::effective_slack() const {
  if (slack) return *slack;
  double s = 0.0;
  for (const auto& g : generators) s = std::max(s, hyperbolic_distance(base_point, apply(g, base_point)));
  return s;
}

MoebiusElement evaluate_word(const GroupPresentation& pres, const std::string& word) {
  std::string w = word;
  std::replace(w.begin(), w.end(), '*', ' ');
  MoebiusElement out = MoebiusElement::identity();
  for (std::string tok : split_ws(w)) {
    bool inv = false;
    if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
      inv = true;
      tok.resize(tok.size() - 3);
    } else if (!tok.empty() && tok.back() == '\'') {
      inv = true;
      tok.pop_back();
    }
    auto it = std::find(pres.labels.begin(), pres.labels.end(), tok);
    if (it == pres.labels.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown generator label '" + tok + "'");
    }
    const auto& g = pres.generators[static_cast<std::size_t>(it - pres.labels.begin())];
    out = out * (inv ? g.inverse() : g);
  }
  return out;
}

GroupPresentation parse_group_text(const std::string& text, const std::string& source) {
  GroupPresentation pres;
  std::optional<double> m;
  std::optional<std::pair<std::string, int>> axis_word;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, where + ": expected 'key = value'");
    const auto key = split_ws(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto vals = split_ws(value);
    if (key.empty()) throw Error(ErrorCode::kParse, where + ": missing key");
    auto single = [&]() {
      if (key.size() != 1 || vals.size() != 1) {
        throw Error(ErrorCode::kParse, where + ": '" + key[0] + "' takes exactly one value");
      }
      return parse_double(vals[0], where);
    };
    if (key[0] == "m") {
      m = single();
    } else if (key[0] == "volume") {
      pres.volume = single();
    } else if (key[0] == "nu") {
      pres.nu = single();
    } else if (key[0] == "slack") {
      pres.slack = single();
    } else if (key[0] == "base_point") {
      if (key.size() != 1 || vals.size() != 2) throw Error(ErrorCode::kParse, where + ": base_point = x y");
      const double x = parse_double(vals[0], where), y = parse_double(vals[1], where);
      if (!(y > 0.0)) throw Error(ErrorCode::kParse, where + ": base point needs y > 0");
      pres.base_point = Point(x, y);
    } else if (key[0] == "relation") {
      pres.relations.push_back(value);
    } else if (key[0] == "axis_word") {
      axis_word = std::make_pair(value, lineno);
    } else if (key[0] == "generator") {
      if (key.size() != 2 || vals.size() != 4) {
        throw Error(ErrorCode::kParse, where + ": expected 'generator <label> = a b c d'");
      }
      if (std::find(pres.labels.begin(), pres.labels.end(), key[1]) != pres.labels.end()) {
        throw Error(ErrorCode::kParse, where + ": duplicate generator label '" + key[1] + "'");
      }
      double e[4];
      for (int i = 0; i < 4; ++i) e[i] = parse_double(vals[static_cast<std::size_t>(i)], where);
      if (std::abs(e[0] * e[3] - e[1] * e[2] - 1.0) > 1e-9) {
        throw Error(ErrorCode::kParse, where + ": generator '" + key[1] + "' is not unimodular");
      }
      if (e[0] == 0.0 || e[3] == 0.0) {
        throw Error(ErrorCode::kParse, where + ": generator '" + key[1] + "' has a zero diagonal entry");
      }
      pres.generators.emplace_back(e[0], e[1], e[2], e[3]);
      pres.labels.push_back(key[1]);
    } else {
      throw Error(ErrorCode::kParse, where + ": unknown key '" + key[0] + "'");
    }
  }
  if (!m) throw Error(ErrorCode::kParse, source + ": missing 'm'");
  if (!(*m > 1.0)) throw Error(ErrorCode::kParse, source + ": m must exceed 1");
  if (pres.generators.empty()) throw Error(ErrorCode::kParse, source + ": no generators");
  if (pres.volume && !(*pres.volume > 0.0)) throw Error(ErrorCode::kParse, source + ": volume must be positive");
  if (!(pres.nu > 0.0)) throw Error(ErrorCode::kParse, source + ": nu must be positive");
  pres.m = *m;
  if (axis_word) {
    const std::string where = source + ":" + std::to_string(axis_word->second);
    MoebiusElement w = MoebiusElement::identity();
    try {
      w = evaluate_word(pres, axis_word->first);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    const auto h = pres.axis_element();
    if (!w.approx_equal(h, 1e-8) && !w.approx_equal(h.inverse(), 1e-8)) {
      throw Error(ErrorCode::kParse, where + ": axis_word does not evaluate to diag(m, 1/m)");
    }
  }
  return pres;
}

GroupPresentation parse_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open group file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_group_text(buf.str(), path);
}

const char* coset_class_name(CosetClass k) {
  switch (k) {
    case CosetClass::kIdentity: return "identity";
    case CosetClass::kRegular: return "regular";
    case CosetClass::kExceptional: return "exceptional";
  }
  return "?";
}

Ball enumerate_ball(const GroupPresentation& pres, int max_word_len, const BallOptions& opt) {
  BfsResult r = bfs(pres, max_word_len, opt.cosh_cap, opt.max_elements,
                    [](int, const std::vector<MoebiusElement>&) {});
  Ball ball;
  ball.shell_sizes = r.shell_sizes;
  ball.elements.reserve(r.set.size());
  for (std::size_t i = 0; i < r.set.size(); ++i) ball.elements.push_back({r.set[i], r.word_length[i]});
  return ball;
}

CosetRepresentative reduce_double_coset(const GroupPresentation& pres, const MoebiusElement& g,
                                        int word_length) {
  return reduce_double_coset(pres.m, pres.m, g, word_length);
}

CosetRepresentative reduce_double_coset(double m_left, double m_right, const MoebiusElement& g,
                                        int word_length) {
  if (!(m_left > 1.0) || !(m_right > 1.0)) throw Error(ErrorCode::kInvalidArgument, "m must exceed 1");
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  const double tol = kZeroTol * scale;
  CosetRepresentative rep;
  rep.word_length = word_length;
  if (std::abs(b) <= tol && std::abs(c) <= tol) return rep;
  if (std::abs(a) <= tol || std::abs(d) <= tol) {
    throw Error(ErrorCode::kDiagonalZeroEntry, "element has a zero diagonal entry");
  }
  if (std::abs(b) <= tol || std::abs(c) <= tol) {
    throw Error(ErrorCode::kDegenerateEntries, "element has exactly one zero off-diagonal entry");
  }
  rep.b_value = b_invariant(g);
  const double ym2 = std::abs(a * b / (c * d));
  const double xm2 = std::abs(b * d / (a * c));
  const double j = -std::floor(std::log(ym2) / (4.0 * std::log(m_left)) + kFloorFuzz);
  const double k = std::floor(std::log(xm2) / (4.0 * std::log(m_right)) + kFloorFuzz);
  rep.element = MoebiusElement::diagonal(std::pow(m_left, j)) * g * MoebiusElement::diagonal(std::pow(m_right, k));
  rep.klass = rep.element.is_exceptional() ? CosetClass::kExceptional : CosetClass::kRegular;
  rep.torsion_suspected = std::abs(rep.b_value - 1.0) < 1e-9;
  return rep;
}

std::size_t Inventory::count_class(CosetClass k) const {
  return static_cast<std::size_t>(
      std::count_if(reps.begin(), reps.end(), [k](const auto& r) { return r.klass == k; }));
}

std::size_t Inventory::count_below(double X) const {
  return static_cast<std::size_t>(
      std::count_if(reps.begin(), reps.end(), [X](const auto& r) { return r.b_value < X; }));
}

Inventory coset_inventory(const GroupPresentation& pres, double X, int max_word_len,
                          const InventoryOptions& opt) {
  return coset_inventory_between(pres, pres, MoebiusElement::identity(), X, max_word_len, opt);
}

Inventory coset_inventory_between(const GroupPresentation& pres1, const GroupPresentation& pres2,
                                  const MoebiusElement& tau, double X, int max_word_len,
                                  const InventoryOptions& opt) {
  const Point p = pres1.base_point;
  const Point i = Point::i();
  const double radius = std::acosh(std::max(X, 1.0)) + 0.5 * (pres1.length() + pres2.length()) +
                        hyperbolic_distance(p, apply(tau, i)) + hyperbolic_distance(p, i) +
                        pres1.effective_slack();
  return build_inventory(pres1, pres2.m, pres1.m, tau.inverse(), X, max_word_len, std::cosh(radius),
                         opt);
}

}  // namespace relcount
