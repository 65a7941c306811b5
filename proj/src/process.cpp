#include "treq/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace treq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProbTol = 1e-12;

void check_probability_vector(const std::vector<double>& p, std::size_t expected,
                              const char* what) {
    if (p.size() != expected) throw std::invalid_argument(std::string(what) + ": wrong length");
    double total = 0.0;
    for (double x : p) {
        if (x < 0.0) throw std::invalid_argument(std::string(what) + ": negative entry");
        total += x;
    }
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument(std::string(what) + ": entries do not sum to one");
}

}  // namespace

ProcessModel build_iid(int d, StateSpace states, std::vector<double> p) {
    if (states.size() < 2) throw std::invalid_argument("build_iid: need at least two states");
    check_probability_vector(p, states.labels.size(), "build_iid: site law");
    ProcessModel model;
    model.kind = ModelKind::Iid;
    model.degree = d;
    model.states = std::move(states);
    model.site_law = std::move(p);
    return model;
}

ProcessModel build_markov_tree(int d, StateSpace states, std::vector<double> pi,
                               std::vector<double> kernel) {
    if (states.size() < 2) throw std::invalid_argument("build_markov_tree: need at least two states");
    const auto k = static_cast<std::size_t>(states.size());
    check_probability_vector(pi, k, "build_markov_tree: root law");
    if (kernel.size() != k * k) throw std::invalid_argument("build_markov_tree: kernel shape");
    for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (kernel[i * k + j] < 0.0)
                throw std::invalid_argument("build_markov_tree: negative kernel entry");
            row += kernel[i * k + j];
        }
        if (std::abs(row - 1.0) > kProbTol)
            throw std::invalid_argument("build_markov_tree: kernel row does not sum to one");
    }
    // Detailed balance makes the edge direction irrelevant, which is what
    // invariance under the full automorphism group requires.
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (std::abs(pi[i] * kernel[i * k + j] - pi[j] * kernel[j * k + i]) > kProbTol)
                throw std::invalid_argument("build_markov_tree: detailed balance violated");

    ProcessModel model;
    model.kind = ModelKind::MarkovTree;
    model.degree = d;
    model.states = std::move(states);
    model.root_law = std::move(pi);
    model.kernel = std::move(kernel);
    return model;
}

ProcessModel build_ising(int d, double beta) {
    const double same = std::exp(beta) / (std::exp(beta) + std::exp(-beta));
    const double diff = 1.0 - same;
    ProcessModel model = build_markov_tree(d, StateSpace{{"+", "-"}}, {0.5, 0.5},
                                           {same, diff, diff, same});
    model.beta = beta;
    return model;
}

ProcessModel build_potts(int d, int N, double beta) {
    if (N < 2) throw std::invalid_argument("build_potts: need at least two states");
    StateSpace states;
    for (int i = 1; i <= N; ++i) states.labels.push_back(std::to_string(i));
    const double w_same = std::exp(-beta);
    const double row_sum = w_same + (N - 1);
    std::vector<double> kernel(static_cast<std::size_t>(N) * N, 1.0 / row_sum);
    for (int i = 0; i < N; ++i) kernel[static_cast<std::size_t>(i) * N + i] = w_same / row_sum;
    std::vector<double> pi(static_cast<std::size_t>(N), 1.0 / N);
    ProcessModel model = build_markov_tree(d, std::move(states), std::move(pi), std::move(kernel));
    model.beta = beta;
    model.potts_states = N;
    return model;
}

nlohmann::json model_to_json(const ProcessModel& model) {
    nlohmann::json j;
    j["kind"] = model.kind == ModelKind::Iid ? "iid" : "markov-tree";
    j["d"] = model.degree;
    j["states"] = model.states.labels;
    if (model.kind == ModelKind::Iid) {
        j["p"] = model.site_law;
    } else {
        j["pi"] = model.root_law;
        const auto k = static_cast<std::size_t>(model.states.size());
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < k; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < k; ++c) row.push_back(model.kernel[i * k + c]);
            rows.push_back(row);
        }
        j["M"] = rows;
    }
    if (model.beta) j["beta"] = *model.beta;
    if (model.potts_states) j["N"] = *model.potts_states;
    return j;
}

ProcessModel model_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.at("d").get<int>();
    StateSpace states{j.at("states").get<std::vector<std::string>>()};
    if (kind == "iid") {
        return build_iid(d, std::move(states), j.at("p").get<std::vector<double>>());
    }
    if (kind != "markov-tree") throw std::invalid_argument("model_from_json: unknown kind");
    if (!j.contains("pi") || !j.contains("M")) {
        // Kernel shorthand: beta with two states is the same-spin/opposite-spin
        // kernel above; beta with N states is the soft-repulsion kernel.
        if (!j.contains("beta")) throw std::invalid_argument("model_from_json: missing pi/M");
        const double beta = j.at("beta").get<double>();
        if (states.size() == 2 && !j.contains("N")) return build_ising(d, beta);
        const int N = j.contains("N") ? j.at("N").get<int>() : states.size();
        return build_potts(d, N, beta);
    }
    std::vector<double> kernel;
    for (const auto& row : j.at("M"))
        for (const auto& x : row) kernel.push_back(x.get<double>());
    ProcessModel model = build_markov_tree(d, std::move(states),
                                           j.at("pi").get<std::vector<double>>(), std::move(kernel));
    if (j.contains("beta")) model.beta = j.at("beta").get<double>();
    if (j.contains("N")) model.potts_states = j.at("N").get<int>();
    return model;
}

Configuration::Configuration(std::vector<std::pair<Word, int>> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i].first == values_[i + 1].first)
            throw std::invalid_argument("Configuration: duplicate site");
}

int Configuration::state_at(const Word& site) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), site,
                                     [](const auto& entry, const Word& w) { return entry.first < w; });
    if (it == values_.end() || it->first != site) return -1;
    return it->second;
}

Configuration Configuration::restrict_to(std::span<const Word> region) const {
    std::vector<std::pair<Word, int>> out;
    out.reserve(region.size());
    for (const Word& site : region) {
        const int state = state_at(site);
        if (state < 0) throw std::invalid_argument("Configuration::restrict_to: site not covered");
        out.emplace_back(site, state);
    }
    return Configuration(std::move(out));
}

nlohmann::json Configuration::to_json(const StateSpace& states) const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [site, state] : values_) j[site.str()] = states.labels.at(state);
    return j;
}

namespace {

// Minimal subtree spanning region and the root: every prefix of every site.
// Shortlex order puts parents before children.
std::vector<Word> spanning_subtree(std::span<const Word> region, std::int64_t cap) {
    std::set<Word> nodes;
    nodes.insert(Word());
    for (const Word& site : region)
        for (int len = 1; len <= site.length(); ++len) {
            nodes.insert(site.prefix(len));
            if (static_cast<std::int64_t>(nodes.size()) > cap)
                throw std::invalid_argument("spanning subtree exceeds configured cap");
        }
    return std::vector<Word>(nodes.begin(), nodes.end());
}

struct SubtreeTopology {
    std::vector<Word> nodes;                  // shortlex: parents first
    std::vector<int> parent;                  // index into nodes, -1 at root
    std::vector<std::vector<int>> children;
};

SubtreeTopology build_topology(std::span<const Word> region, std::int64_t cap) {
    SubtreeTopology topo;
    topo.nodes = spanning_subtree(region, cap);
    topo.parent.assign(topo.nodes.size(), -1);
    topo.children.resize(topo.nodes.size());
    std::map<Word, int> index;
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) index.emplace(topo.nodes[i], static_cast<int>(i));
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
        if (topo.nodes[i].empty()) continue;
        const int p = index.at(topo.nodes[i].prefix(topo.nodes[i].length() - 1));
        topo.parent[i] = p;
        topo.children[p].push_back(static_cast<int>(i));
    }
    return topo;
}

}  // namespace

Configuration sample_region(const ProcessModel& model, std::span<const Word> region, Rng& rng,
                            std::int64_t spanning_cap) {
    const int k = model.states.size();
    const auto draw = [&](const double* law) {
        double u = rng.next_unit();
        for (int s = 0; s + 1 < k; ++s) {
            u -= law[s];
            if (u < 0.0) return s;
        }
        return k - 1;
    };

    std::vector<std::pair<Word, int>> values;
    values.reserve(region.size());
    if (model.kind == ModelKind::Iid) {
        std::vector<Word> sorted(region.begin(), region.end());
        std::sort(sorted.begin(), sorted.end());
        for (const Word& site : sorted) values.emplace_back(site, draw(model.site_law.data()));
        return Configuration(std::move(values));
    }

    const SubtreeTopology topo = build_topology(region, spanning_cap);
    std::vector<int> state(topo.nodes.size());
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
        state[i] = topo.parent[i] < 0 ? draw(model.root_law.data())
                                      : draw(&model.kernel[static_cast<std::size_t>(
                                                 state[topo.parent[i]] * k)]);
    }
    std::map<Word, int> index;
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) index.emplace(topo.nodes[i], static_cast<int>(i));
    for (const Word& site : region) values.emplace_back(site, state[index.at(site)]);
    return Configuration(std::move(values));
}

double exact_region_log_prob(const ProcessModel& model, const Configuration& config,
                             std::int64_t spanning_cap) {
    if (config.empty()) return 0.0;
    const int k = model.states.size();
    for (const auto& [site, state] : config.values())
        if (state < 0 || state >= k)
            throw std::invalid_argument("exact_region_log_prob: state out of range");

    std::vector<double> log_terms;
    if (model.kind == ModelKind::Iid) {
        log_terms.reserve(config.values().size());
        for (const auto& [site, state] : config.values())
            log_terms.push_back(std::log(model.site_law[state]));
        return pairwise_sum(log_terms);
    }

    std::vector<Word> region;
    region.reserve(config.values().size());
    for (const auto& [site, state] : config.values()) region.push_back(site);
    const SubtreeTopology topo = build_topology(region, spanning_cap);
    const std::size_t n = topo.nodes.size();

    // Upward sum-product: message[i][x] is proportional to the probability of
    // all observations in the subtree below node i given state x at i, with a
    // per-node rescaling whose logs accumulate in log_terms.
    std::vector<std::vector<double>> message(n, std::vector<double>(k, 1.0));
    log_terms.reserve(n + 1);
    for (std::size_t idx = n; idx-- > 0;) {
        auto& msg = message[idx];
        const int observed = config.state_at(topo.nodes[idx]);
        if (observed >= 0)
            for (int x = 0; x < k; ++x)
                if (x != observed) msg[x] = 0.0;
        for (const int child : topo.children[idx]) {
            const auto& child_msg = message[child];
            for (int x = 0; x < k; ++x) {
                if (msg[x] == 0.0) continue;
                double through = 0.0;
                for (int y = 0; y < k; ++y)
                    through += model.kernel[static_cast<std::size_t>(x) * k + y] * child_msg[y];
                msg[x] *= through;
            }
        }
        const double scale = *std::max_element(msg.begin(), msg.end());
        if (scale <= 0.0) return kNegInf;
        for (double& x : msg) x /= scale;
        log_terms.push_back(std::log(scale));
    }

    double root_mass = 0.0;
    for (int x = 0; x < k; ++x) root_mass += model.root_law[x] * message[0][x];
    if (root_mass <= 0.0) return kNegInf;
    log_terms.push_back(std::log(root_mass));
    return pairwise_sum(log_terms);
}

double info_value(const ProcessModel& model, const Configuration& config,
                  std::int64_t spanning_cap) {
    return -exact_region_log_prob(model, config, spanning_cap);
}

namespace {

std::int64_t atom_count(int k, std::size_t region_size, std::int64_t cap, const char* what) {
    std::int64_t count = 1;
    for (std::size_t i = 0; i < region_size; ++i) {
        count *= k;
        if (count > cap) throw std::invalid_argument(std::string(what) + ": atom count exceeds cap");
    }
    return count;
}

Configuration atom_config(std::span<const Word> sorted_region, int k, std::int64_t atom) {
    std::vector<std::pair<Word, int>> values;
    values.reserve(sorted_region.size());
    for (const Word& site : sorted_region) {
        values.emplace_back(site, static_cast<int>(atom % k));
        atom /= k;
    }
    return Configuration(std::move(values));
}

}  // namespace

double entropy_exact(const ProcessModel& model, std::span<const Word> region, Exec exec,
                     std::int64_t atom_cap) {
    std::vector<Word> sorted(region.begin(), region.end());
    std::sort(sorted.begin(), sorted.end());
    const int k = model.states.size();
    const std::int64_t atoms = atom_count(k, sorted.size(), atom_cap, "entropy_exact");

    // Per-atom terms land in fixed slots; the reduction is a serial pairwise
    // sum, so the result does not depend on the execution policy.
    std::vector<double> terms(static_cast<std::size_t>(atoms), 0.0);
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t a = 0; a < atoms; ++a) {
        const double logp = exact_region_log_prob(model, atom_config(sorted, k, a));
        if (logp != kNegInf) terms[static_cast<std::size_t>(a)] = -std::exp(logp) * logp;
    }
    return pairwise_sum(terms);
}

double psi_coeff(const ProcessModel& model, std::span<const Word> u_region,
                 std::span<const Word> v_region, Exec exec, ZeroAtomPolicy policy,
                 std::int64_t atom_cap) {
    std::vector<Word> u_sorted(u_region.begin(), u_region.end());
    std::vector<Word> v_sorted(v_region.begin(), v_region.end());
    std::sort(u_sorted.begin(), u_sorted.end());
    std::sort(v_sorted.begin(), v_sorted.end());
    for (const Word& site : u_sorted)
        if (std::binary_search(v_sorted.begin(), v_sorted.end(), site))
            throw std::invalid_argument("psi_coeff: regions must be disjoint");

    const int k = model.states.size();
    atom_count(k, u_sorted.size() + v_sorted.size(), atom_cap, "psi_coeff");
    const std::int64_t u_atoms = atom_count(k, u_sorted.size(), atom_cap, "psi_coeff");
    const std::int64_t v_atoms = atom_count(k, v_sorted.size(), atom_cap, "psi_coeff");

    std::vector<double> u_logp(static_cast<std::size_t>(u_atoms));
    std::vector<double> v_logp(static_cast<std::size_t>(v_atoms));
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t a = 0; a < u_atoms; ++a)
        u_logp[static_cast<std::size_t>(a)] = exact_region_log_prob(model, atom_config(u_sorted, k, a));
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t a = 0; a < v_atoms; ++a)
        v_logp[static_cast<std::size_t>(a)] = exact_region_log_prob(model, atom_config(v_sorted, k, a));

    const std::int64_t pairs = u_atoms * v_atoms;
    std::vector<double> deviation(static_cast<std::size_t>(pairs), 0.0);
    std::vector<std::uint8_t> undefined(static_cast<std::size_t>(pairs), 0);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t p = 0; p < pairs; ++p) {
        const std::int64_t ua = p % u_atoms;
        const std::int64_t va = p / u_atoms;
        const double lu = u_logp[static_cast<std::size_t>(ua)];
        const double lv = v_logp[static_cast<std::size_t>(va)];
        if (lu == kNegInf || lv == kNegInf) {
            undefined[static_cast<std::size_t>(p)] = 1;
            continue;
        }
        std::vector<std::pair<Word, int>> joint;
        joint.reserve(u_sorted.size() + v_sorted.size());
        std::int64_t rest = ua;
        for (const Word& site : u_sorted) {
            joint.emplace_back(site, static_cast<int>(rest % k));
            rest /= k;
        }
        rest = va;
        for (const Word& site : v_sorted) {
            joint.emplace_back(site, static_cast<int>(rest % k));
            rest /= k;
        }
        const double ljoint = exact_region_log_prob(model, Configuration(std::move(joint)));
        // Symmetric in U and V: the marginal logs are combined before the
        // subtraction, so psi(U, V) and psi(V, U) agree bit for bit.
        const double ratio = ljoint == kNegInf ? 0.0 : std::exp(ljoint - (lu + lv));
        deviation[static_cast<std::size_t>(p)] = std::abs(ratio - 1.0);
    }

    double sup = 0.0;
    for (std::int64_t p = 0; p < pairs; ++p) {
        if (undefined[static_cast<std::size_t>(p)]) {
            if (policy == ZeroAtomPolicy::Infinity)
                return std::numeric_limits<double>::infinity();
            continue;
        }
        sup = std::max(sup, deviation[static_cast<std::size_t>(p)]);
    }
    return sup;
}

DecayFit fit_decay(int d, std::span<const DecayPoint> points) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const DecayPoint& pt : points) {
        if (pt.psi <= 0.0) continue;
        xs.push_back(pt.dist);
        ys.push_back(std::log(pt.psi) - std::log(pt.size_u * pt.size_v));
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_decay: need two points with psi > 0");
    const double x_mean = pairwise_sum(xs) / static_cast<double>(xs.size());
    const double y_mean = pairwise_sum(ys) / static_cast<double>(ys.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_decay: degenerate fit (all distances equal)");

    DecayFit fit;
    fit.lambda = -sxy / sxx;
    fit.prefactor = std::exp(y_mean + fit.lambda * x_mean);
    fit.threshold = 2.0 * std::log(static_cast<double>(d - 1));
    fit.exceeds_threshold = fit.lambda > fit.threshold;
    fit.points_used = static_cast<int>(xs.size());
    return fit;
}

}  // namespace treq
