#pragma once
// The eight acceptance suites.  Each runner is deterministic in its seed and
// returns a pass flag plus a JSON detail record; wall time is reported for
// the console only and never serialized.

#include <cstdint>
#include <string>
#include <vector>

#include "flowembed/serialize.hpp"

namespace flowembed {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;  // console display only
  ojson details;
};

CriterionResult criterion_tiling(std::uint64_t seed);         // 1
CriterionResult criterion_params(std::uint64_t seed);         // 2
CriterionResult criterion_phi(std::uint64_t seed);            // 3
CriterionResult criterion_rigidity(std::uint64_t seed);       // 4
CriterionResult criterion_perturb(std::uint64_t seed);        // 5
CriterionResult criterion_flows(std::uint64_t seed);          // 6
CriterionResult criterion_suspension(std::uint64_t seed);     // 7
CriterionResult criterion_realification(std::uint64_t seed);  // 8

// Empty subset = all eight in order; entries must lie in 1..8.
std::vector<CriterionResult> verify_all(std::uint64_t seed,
                                        const std::vector<int>& subset = {});

ojson verify_to_json(const std::vector<CriterionResult>& results,
                     std::uint64_t seed);

// The showcase parameter record (a=2, delta=0.8, L=10, M=10, M1=25, c=1.02)
// and its kernel, computed once per process.
const SpectralKernel& desk_kernel();
const EmbeddingParams& desk_params();

}  // namespace flowembed
