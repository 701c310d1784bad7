#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fusion/matrix.hpp"
#include "fusion/modules.hpp"

namespace fusion {

enum class Orientation { directed, symmetrized };

// Multigraph with adjacency matrix of multiplicities; a diagonal entry k is
// k loops at that vertex.
struct FusionGraph {
  std::vector<Label> vertices;
  IntMatrix adjacency;
  Orientation orientation = Orientation::directed;
  std::vector<double> dims;    // optional, parallel to vertices
  std::vector<bool> boundary;  // optional truncation boundary marks
};

// How a directed module graph becomes an undirected one.
enum class Symmetrization {
  assume_symmetric,  // M must already be symmetric (self-dual alpha)
  sum,               // M + M^T
  underlying,        // one edge wherever M or M^T is nonzero
};

IntMatrix module_matrix(const BasedModuleTable& m, const Label& alpha);

FusionGraph fusion_graph(const BasedModuleTable& m, const Label& alpha,
                         const std::optional<ModuleDimensionVector>& dims = std::nullopt);
FusionGraph fusion_graph(const TruncatedModule& t, const Label& generator);
// Throws std::invalid_argument for assume_symmetric on a non-symmetric graph.
FusionGraph symmetrize(const FusionGraph& g, Symmetrization rule);

// M(alpha * beta) = M(beta) M(alpha) in the row convention M_{b,c} = N_{alpha b}^c,
// and M(dual alpha) = M(alpha)^T.
bool matrix_homomorphism_check(const BasedModuleTable& m, const Label& alpha, const Label& beta);

struct SchurReport {
  double d_alpha = 0;
  double spectral_radius = 0;
  double max_relative_error = 0;  // of M(alpha) D against d(alpha) D
  bool eigen_ok = false;
  bool norm_ok = false;
  bool passed() const { return eigen_ok && norm_ok; }
};

SchurReport schur_norm_check(const BasedModuleTable& m, const ModuleDimensionVector& dims,
                             const DimensionFunction& ring_dims, const Label& alpha, double tol = 1e-6);

enum class DynkinClass {
  A,
  D,
  E6,
  E7,
  E8,
  tadpole,
  A_tilde,
  D_tilde,
  E6_tilde,
  E7_tilde,
  E8_tilde,
  loop_norm2,
  a_infinity_truncation,
  exceeds_2,
  other_subcritical,
};

struct DynkinVerdict {
  DynkinClass cls = DynkinClass::exceeds_2;
  std::size_t n = 0;  // rank parameter (A_n, D_n, T_n, ...); vertex count otherwise
  std::string name;   // e.g. "A5", "tadpole T2", "E8~"
  double norm = 0;    // closed form when known, numeric otherwise
  // Nonnegative vector v with (Mv)_i > 2 v_i somewhere (exceeds_2) or Mv <= 2v
  // (other_subcritical).
  std::vector<double> certificate;

  bool norm_below_2() const;
  bool norm_equal_2() const;
  std::string describe() const;  // name plus norm relation
};

// Structural recognition of connected undirected graphs of norm <= 2. Throws
// DisconnectedGraph on disconnected input. Vertices marked as boundary turn a
// path ending there into an A-infinity truncation.
DynkinVerdict dynkin_classify(const FusionGraph& g);

struct AInfinityResult {
  bool passed = false;
  std::size_t components = 0;
  std::string reason;
  explicit operator bool() const { return passed; }
};

// Every component is a simple path with degree 1 only at boundary vertices
// and at most one interior origin.
AInfinityResult a_infinity_check(const FusionGraph& g);

std::string export_dot(const FusionGraph& g);

}  // namespace fusion
