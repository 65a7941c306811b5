#pragma once

// Exactly evaluable tree processes: i.i.d. fields and homogeneous Markov tree
// fields (root law + one detailed-balance edge kernel, which makes the law
// invariant under every tree automorphism). Joint probabilities of finite
// configurations are computed exactly by sum-product elimination over the
// minimal spanning subtree, so information values, entropies and dependence
// coefficients need no estimation.
//
// The atom-enumeration kernels (entropy_exact, psi_coeff) are data-parallel;
// both keep a serial reference path and produce bit-identical results under
// either policy.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "treq/numeric.hpp"
#include "treq/words.hpp"

namespace treq {

inline constexpr std::int64_t kDefaultSpanningCap = 100000;
inline constexpr std::int64_t kDefaultEntropyAtomCap = std::int64_t{1} << 16;
inline constexpr std::int64_t kDefaultBruteAtomCap = std::int64_t{1} << 20;

struct StateSpace {
    std::vector<std::string> labels;  // fixed order drives atom enumeration

    int size() const { return static_cast<int>(labels.size()); }
};

enum class ModelKind { Iid, MarkovTree };

struct ProcessModel {
    ModelKind kind = ModelKind::Iid;
    int degree = 3;
    StateSpace states;
    std::vector<double> site_law;             // iid: one law per site
    std::vector<double> root_law;             // markov-tree: law at the root
    std::vector<double> kernel;               // markov-tree: row-major edge kernel
    std::optional<double> beta;               // annotation for kernels built from an inverse temperature
    std::optional<int> potts_states;

    double kernel_at(int from, int to) const { return kernel[from * states.size() + to]; }
};

ProcessModel build_iid(int d, StateSpace states, std::vector<double> p);
ProcessModel build_markov_tree(int d, StateSpace states, std::vector<double> pi,
                               std::vector<double> kernel);

// Two-state kernel with same-spin weight e^beta and opposite-spin weight
// e^{-beta}; beta = 0 degenerates to the fair i.i.d. field.
ProcessModel build_ising(int d, double beta);

// N-state kernel with weights e^{-beta delta_ij}, uniform root law.
ProcessModel build_potts(int d, int N, double beta);

nlohmann::json model_to_json(const ProcessModel& model);
ProcessModel model_from_json(const nlohmann::json& j);

// Total assignment of states to a finite region; sites kept sorted.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<std::pair<Word, int>> values);

    const std::vector<std::pair<Word, int>>& values() const { return values_; }
    bool empty() const { return values_.empty(); }
    int size() const { return static_cast<int>(values_.size()); }

    int state_at(const Word& site) const;  // -1 when absent
    Configuration restrict_to(std::span<const Word> region) const;

    nlohmann::json to_json(const StateSpace& states) const;

private:
    std::vector<std::pair<Word, int>> values_;
};

// One exact draw of the process on `region`: root law at the root, then the
// kernel along every edge of the minimal spanning subtree, restricted back.
Configuration sample_region(const ProcessModel& model, std::span<const Word> region, Rng& rng,
                            std::int64_t spanning_cap = kDefaultSpanningCap);

// log mu(configuration), marginalizing unobserved interior sites exactly.
// Returns -inf for a zero-probability atom.
double exact_region_log_prob(const ProcessModel& model, const Configuration& config,
                             std::int64_t spanning_cap = kDefaultSpanningCap);

// Information value -log mu; nonnegative.
double info_value(const ProcessModel& model, const Configuration& config,
                  std::int64_t spanning_cap = kDefaultSpanningCap);

// Shannon entropy of the joint partition over `region` by full atom
// enumeration (|E|^|region| must stay within the cap).
double entropy_exact(const ProcessModel& model, std::span<const Word> region,
                     Exec exec = Exec::Parallel, std::int64_t atom_cap = kDefaultEntropyAtomCap);

enum class ZeroAtomPolicy { Exclude, Infinity };

// Worst-case multiplicative deviation from independence between the
// configurations on U and V:
//   sup_{i,j} | mu(i on U, j on V) / (mu(i on U) mu(j on V)) - 1 |.
// Atom pairs with a zero-probability marginal are excluded (or force +inf,
// by policy); with strictly positive kernels they never occur.
double psi_coeff(const ProcessModel& model, std::span<const Word> u_region,
                 std::span<const Word> v_region, Exec exec = Exec::Parallel,
                 ZeroAtomPolicy policy = ZeroAtomPolicy::Exclude,
                 std::int64_t atom_cap = kDefaultBruteAtomCap);

struct DecayPoint {
    double dist;
    double psi;
    double size_u;
    double size_v;
};

struct DecayFit {
    double lambda = 0.0;
    double prefactor = 0.0;  // C
    double threshold = 0.0;  // 2 log(d-1)
    bool exceeds_threshold = false;
    int points_used = 0;
};

// Least squares of log psi - log(|U||V|) against -lambda * distance + log C.
// Needs two points with psi > 0 at distinct distances.
DecayFit fit_decay(int d, std::span<const DecayPoint> points);

}  // namespace treq
