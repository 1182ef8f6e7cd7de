#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relcount/hyperbolic.hpp"

namespace relcount {

// Generators of a cocompact torsion-free group containing diag(m, 1/m).
struct GroupPresentation {
  std::vector<MoebiusElement> generators;
  std::vector<std::string> labels;
  double m = 0.0;
  std::optional<double> volume;
  double nu = 1.0;
  // Extra radius for the pruned enumeration; default is the largest generator
  // displacement of the base point.
  std::optional<double> slack;
  Point base_point = Point::i();
  std::vector<std::string> relations;

  double length() const;
  MoebiusElement axis_element() const { return MoebiusElement::diagonal(m); }
  double effective_slack() const;
};

// Structured text: `key = value` lines, `#` comments. Keys: m, volume, nu, slack,
// base_point (x y), relation (word), axis_word (word), generator <label> (a b c d).
GroupPresentation parse_group_text(const std::string& text,
                                   const std::string& source = "<text>");
GroupPresentation parse_group_file(const std::string& path);

// Word in generator labels; `X^-1` or `X'` for inverses.
MoebiusElement evaluate_word(const GroupPresentation& pres, const std::string& word);

enum class CosetClass { kIdentity, kRegular, kExceptional };
const char* coset_class_name(CosetClass k);

struct CosetRepresentative {
  MoebiusElement element = MoebiusElement::identity();
  double b_value = 1.0;
  CosetClass klass = CosetClass::kIdentity;
  int word_length = 0;
  bool torsion_suspected = false;
};

struct BallElement {
  MoebiusElement element;
  int word_length;
};

struct BallOptions {
  std::size_t max_elements = 20000000;
  // Keep only elements with cosh d(p, g p) <= cosh_cap.
  double cosh_cap = INFINITY;
};

struct Ball {
  std::vector<BallElement> elements;
  std::vector<std::size_t> shell_sizes;  // new elements per word length
};

Ball enumerate_ball(const GroupPresentation& pres, int max_word_len, const BallOptions& opt = {});

CosetRepresentative reduce_double_coset(const GroupPresentation& pres, const MoebiusElement& g,
                                        int word_length = 0);
// H_left \ G / H_right with H = <diag(m, 1/m)>.
CosetRepresentative reduce_double_coset(double m_left, double m_right, const MoebiusElement& g,
                                        int word_length = 0);

struct Inventory {
  std::vector<CosetRepresentative> reps;  // sorted by b_value
  double x_cover = 0.0;                   // complete for B < x_cover when stable
  int word_depth = 0;
  bool stable = false;     // the last shell added no representative
  bool saturated = false;  // the pruned ball stopped growing
  std::size_t ball_size = 0;
  std::size_t diagonal_rejects = 0;
  std::size_t torsion_suspected = 0;
  std::vector<std::size_t> new_reps_per_shell;

  std::size_t count_class(CosetClass k) const;
  // #{reps : B < X}
  std::size_t count_below(double X) const;
};

struct InventoryOptions {
  std::size_t max_elements = 20000000;
};

Inventory coset_inventory(const GroupPresentation& pres, double X, int max_word_len,
                          const InventoryOptions& opt = {});

// Double cosets H_2 \ G / H_1 keyed by B(tau^{-1} gamma), H_2 = tau <diag(m2)> tau^{-1}.
Inventory coset_inventory_between(const GroupPresentation& pres1, const GroupPresentation& pres2,
                                  const MoebiusElement& tau, double X, int max_word_len,
                                  const InventoryOptions& opt = {});

}  // namespace relcount
