#pragma once

// Exhaustive invariant suites behind `treequipart verify`. Each check returns
// pass/fail with a short detail string; a suite passes iff every check does.

#include <cstdint>
#include <string>
#include <vector>

namespace treq {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

bool all_pass(const std::vector<CheckResult>& results);

// Group structure over the boundary, d in {3,4}, depth-5 prefixes:
// generator compression, exact action order, the homomorphism identity, full
// orbits, and the cocycle identity.
std::vector<CheckResult> group_suite();

// Coset blocks partition the even spheres: d=3 for n=1..4 and d=4 for
// n=1..3, block sizes, pairwise separation 2n, and the n=1 block table.
std::vector<CheckResult> partition_suite();

// Flips, geodesic and horosphere mappers verify as parity-preserving
// automorphisms, and the horosphere mapper carries labelled sites correctly.
std::vector<CheckResult> automorphism_suite(std::uint64_t seed = 20240811);

// Process-model invariants: automorphism invariance of entropy, chain-rule
// and marginal consistency, psi symmetry, correlation decay, and the
// telescoping product bound for the two-state kernel at n=1.
std::vector<CheckResult> process_suite();

}  // namespace treq
