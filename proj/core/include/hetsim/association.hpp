#pragma once

#include <string>
#include <vector>

namespace hetsim::assoc {

enum class Tier { macro, small };

// Index allocation (best macro sector / best small cell by link spectral
// efficiency, ties to the lowest id). small_index = -1 when the UE has no
// small-cell candidate.
struct IndexChoice {
  int macro_index = 0;
  int small_index = -1;
};

IndexChoice allocate_indices_for_ue(const std::vector<double>& macro_ce,
                                    const std::vector<double>& small_ce);

// One user's inputs to the per-area combinatorial problem.
struct SubUE {
  int ue_id = 0;
  double ce_macro = 0.0;  // bps/Hz, macro link
  double ce_small = 0.0;  // bps/Hz, link to this subproblem's small cell
  double demand = 0.0;    // bps
};

// One small-cell area's slice of the system-rate objective.
struct SubProblem {
  int small_cell_id = 0;
  double alpha_s = 0.0;     // macro resource share attributed to this area
  double w_macro_hz = 0.0;  // W_M
  double w_small_hz = 0.0;  // W_s of this cell's band
  std::vector<SubUE> ues;
};

struct SubProblemSolution {
  int k = 0;                     // macro-user count at the optimum
  std::vector<bool> on_macro;    // x: one flag per subproblem UE
  double value_bps = 0.0;        // optimal R_s
};

// Exactly k ones placed on the k largest elements of f (ties to the lower
// index); maximizes the constrained linear objective.
std::vector<bool> topk_select(const std::vector<double>& f, int k);

// Sweeps k = 0..U; for interior k ranks users by
//   f_u = min(alpha W_M ce_m / k, L_u) - min(W_s ce_s / (U-k), L_u)
// and takes the k largest; the pure all-small / all-macro ends are evaluated
// directly. Ties on R_s resolve to the smaller k.
SubProblemSolution solve_subproblem(const SubProblem& sp);

// Exhaustive 2^U enumeration of the same objective (U <= 20). Verification
// oracle for the solver.
SubProblemSolution brute_force_subproblem(const SubProblem& sp);

// Per-UE link data for one drop as consumed by the association engines.
// Vectors indexed by small-cell position in the drop's small-cell list.
struct UeLinks {
  int ue_id = 0;
  double demand = 0.0;
  int macro_sector = 0;    // serving sector (argmax C^e over evaluated sectors)
  double macro_sinr = 0.0; // linear
  double macro_ce = 0.0;   // bps/Hz
  std::vector<double> small_sinr;
  std::vector<double> small_ce;  // steered (final) values
  int best_small = -1;           // i_s from the indexing phase, -1 if none
};

struct DropLinks {
  double w_macro_hz = 0.0;
  std::vector<double> w_small_hz;  // per small cell
  std::vector<UeLinks> ues;
};

struct Assignment {
  struct Choice {
    Tier tier = Tier::macro;
    int cell = 0;  // macro: serving sector id; small: small-cell index
  };
  std::vector<Choice> per_ue;
  std::vector<int> subproblem_k;  // macro-user count per small cell
  int iterations = 0;
  bool converged = true;

  int macro_count() const;
};

// Conventional baseline: every UE attaches to its maximum-SINR cell across
// all bands; ties prefer macro, then the lowest cell id.
Assignment associate_max_sinr(const DropLinks& links);

// Partition of the macro area into small-cell areas with the resource shares
// alpha_s = |M_s| / |M| taken from `current`. UEs with no usable small cell
// are permanently macro: they count toward |M| but join no subproblem.
// Throws std::logic_error when |M| = 0 while permanent-macro users exist.
std::vector<SubProblem> partition(const DropLinks& links, const Assignment& current);

// Centralized association: index allocation and partition feed per-area
// combinatorial solves; alpha_s is recomputed between sweeps (fixed point,
// seeded from max-SINR). Returns the best-system-rate iterate seen.
Assignment associate_combinatorial(const DropLinks& links, int max_iters = 10);

// Fixture serialization for the oracle test corpus.
std::string subproblem_to_json(const SubProblem& sp);
SubProblem subproblem_from_json(const std::string& text);

}  // namespace hetsim::assoc
