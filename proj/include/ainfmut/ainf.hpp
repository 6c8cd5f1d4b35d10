#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ainfmut/graded.hpp"

namespace ainfmut {

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Key of one stored composition entry: object chain (strictly increasing,
/// 0-based) and input basis indices, first-applied morphism first. The paper
/// writes mu^d(a^d,...,a^1) with a^1 rightmost; storage reverses that.
struct MuKey {
    std::vector<int> chain;  // d+1 objects
    std::vector<int> inputs; // d basis indices, inputs[v] in hom(chain[v], chain[v+1])

    auto operator<=>(const MuKey&) const = default;
};

// Comparator giving the canonical serialization order: arity, then chain,
// then inputs.
struct MuKeyLess {
    bool operator()(const MuKey& a, const MuKey& b) const {
        if (a.chain.size() != b.chain.size())
            return a.chain.size() < b.chain.size();
        if (a.chain != b.chain)
            return a.chain < b.chain;
        return a.inputs < b.inputs;
    }
};

using MuTable = std::map<MuKey, XorSet, MuKeyLess>;

/// Directed A∞-category over GF(2): ordered objects, hom spaces only from
/// lower to higher index, strict implicit identities on the diagonal, and a
/// sparse table of composition entries.
struct AInfCategory {
    std::vector<std::string> objectNames;
    std::map<std::pair<int, int>, GradedSpace> homs; // keys i < k, absent = zero
    MuTable mus;

    int num_objects() const { return static_cast<int>(objectNames.size()); }

    const GradedSpace& hom(int i, int k) const {
        static const GradedSpace kZero;
        auto it = homs.find({i, k});
        return it == homs.end() ? kZero : it->second;
    }

    void set_hom(int i, int k, GradedSpace s) {
        if (s.dim() == 0)
            homs.erase({i, k});
        else
            homs[{i, k}] = std::move(s);
    }

    /// Toggle one output term of mu^d on the given basis tuple (GF(2) sum).
    void add_mu(std::vector<int> chain, std::vector<int> inputs, int output) {
        MuKey key{std::move(chain), std::move(inputs)};
        XorSet& out = mus[key];
        xor_single(out, output);
        if (out.empty())
            mus.erase(key);
    }

    /// Compositions vanish above this arity (max(m-1, 2)).
    int max_arity() const { return std::max(num_objects() - 1, 2); }

    bool operator==(const AInfCategory& o) const {
        return objectNames == o.objectNames && homs == o.homs && mus == o.mus;
    }
};

// ---------------------------------------------------------------------------
// Evaluation of mu on basis elements and on GF(2) sums, with the strict-unit
// rules for the implicit identities.

struct MuArg {
    bool isId = false;
    int idx = 0;
    static MuArg id() { return {true, 0}; }
    static MuArg basis(int i) { return {false, i}; }
};

/// A value in hom(c0, cd): an id-line coefficient when c0 == cd, otherwise a
/// GF(2) sum of basis elements.
struct MuVal {
    bool idCoeff = false;
    XorSet set;

    bool zero() const { return !idCoeff && set.empty(); }
    void xor_with(const MuVal& o) {
        idCoeff ^= o.idCoeff;
        xor_into(set, o.set);
    }
};

inline MuVal eval_mu_basis(const AInfCategory& cat, const std::vector<int>& chain,
                           const std::vector<MuArg>& args) {
    const std::size_t d = args.size();
    MuVal out;
    if (d == 0 || chain.size() != d + 1)
        return out;
    if (d == 1) {
        if (args[0].isId)
            return out; // mu^1(id) = 0
        auto it = cat.mus.find(MuKey{chain, {args[0].idx}});
        if (it != cat.mus.end())
            out.set = it->second;
        return out;
    }
    if (d == 2) {
        // Strict units: mu^2(id, a) = mu^2(a, id) = a.
        if (args[0].isId && args[1].isId) {
            out.idCoeff = true;
            return out;
        }
        if (args[0].isId) {
            out.set = {args[1].idx};
            return out;
        }
        if (args[1].isId) {
            out.set = {args[0].idx};
            return out;
        }
        auto it = cat.mus.find(MuKey{chain, {args[0].idx, args[1].idx}});
        if (it != cat.mus.end())
            out.set = it->second;
        return out;
    }
    // d >= 3: any identity input kills the composition.
    std::vector<int> idxs;
    idxs.reserve(d);
    for (const MuArg& a : args) {
        if (a.isId)
            return out;
        idxs.push_back(a.idx);
    }
    auto it = cat.mus.find(MuKey{chain, idxs});
    if (it != cat.mus.end())
        out.set = it->second;
    return out;
}

/// Multilinear extension of eval_mu_basis to sums.
inline MuVal eval_mu(const AInfCategory& cat, const std::vector<int>& chain,
                     const std::vector<MuVal>& args) {
    MuVal total;
    std::vector<MuArg> tuple(args.size());
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == args.size()) {
            total.xor_with(eval_mu_basis(cat, chain, tuple));
            return;
        }
        if (args[pos].idCoeff) {
            tuple[pos] = MuArg::id();
            self(self, pos + 1);
        }
        for (int i : args[pos].set) {
            tuple[pos] = MuArg::basis(i);
            self(self, pos + 1);
        }
    };
    if (!args.empty())
        rec(rec, 0);
    return total;
}

// ---------------------------------------------------------------------------
// Validation.

namespace detail {

inline std::string chain_str(const std::vector<int>& chain) {
    std::ostringstream os;
    for (std::size_t i = 0; i < chain.size(); ++i)
        os << (i ? "<" : "") << chain[i] + 1;
    return os.str();
}

inline std::string entry_str(const AInfCategory& cat, const MuKey& key, const XorSet& out) {
    std::ostringstream os;
    os << "mu^" << key.inputs.size() << " chain " << chain_str(key.chain) << " inputs [";
    for (std::size_t v = 0; v < key.inputs.size(); ++v) {
        const GradedSpace& h = cat.hom(key.chain[v], key.chain[v + 1]);
        os << (v ? "," : "")
           << (key.inputs[v] < h.dim() ? h.label(key.inputs[v]) : "#" + std::to_string(key.inputs[v]));
    }
    os << "] -> {";
    const GradedSpace& ht = cat.hom(key.chain.front(), key.chain.back());
    for (std::size_t v = 0; v < out.size(); ++v)
        os << (v ? "," : "") << (out[v] < ht.dim() ? ht.label(out[v]) : "#" + std::to_string(out[v]));
    os << "}";
    return os.str();
}

} // namespace detail

/// Shape checks for a directed category: hom keys, label uniqueness, chain
/// monotonicity, index ranges and the degree rule deg(out) = sum deg(in) + 2 - d.
inline ValidationReport validate_directed(const AInfCategory& cat) {
    ValidationReport rep;
    const int m = cat.num_objects();
    for (const auto& [key, space] : cat.homs) {
        auto [i, k] = key;
        std::string pair = "hom(" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")";
        if (i < 0 || k >= m || i >= k) {
            rep.violations.push_back(pair + ": invalid object pair for a directed category");
            continue;
        }
        if (!space.labels_unique())
            rep.violations.push_back(pair + ": duplicate basis labels");
    }
    for (const auto& [key, out] : cat.mus) {
        const std::string what = detail::entry_str(cat, key, out);
        if (key.chain.size() < 2 || key.inputs.size() + 1 != key.chain.size()) {
            rep.violations.push_back(what + ": malformed entry");
            continue;
        }
        bool increasing = true;
        for (std::size_t v = 0; v + 1 < key.chain.size(); ++v)
            if (key.chain[v] >= key.chain[v + 1])
                increasing = false;
        if (!increasing || key.chain.front() < 0 || key.chain.back() >= m) {
            rep.violations.push_back(what + ": chain not strictly increasing in range");
            continue;
        }
        bool indexed = true;
        int degIn = 0;
        for (std::size_t v = 0; v < key.inputs.size(); ++v) {
            const GradedSpace& h = cat.hom(key.chain[v], key.chain[v + 1]);
            if (key.inputs[v] < 0 || key.inputs[v] >= h.dim()) {
                rep.violations.push_back(what + ": input " + std::to_string(v + 1) +
                                         " out of range");
                indexed = false;
                break;
            }
            degIn += h.degree(key.inputs[v]);
        }
        if (!indexed)
            continue;
        const GradedSpace& ht = cat.hom(key.chain.front(), key.chain.back());
        const int d = static_cast<int>(key.inputs.size());
        for (int o : out) {
            if (o < 0 || o >= ht.dim()) {
                rep.violations.push_back(what + ": output out of range");
                continue;
            }
            if (ht.degree(o) != degIn + 2 - d)
                rep.violations.push_back(what + ": degree mismatch (output '" + ht.label(o) +
                                         "' has degree " + std::to_string(ht.degree(o)) +
                                         ", expected " + std::to_string(degIn + 2 - d) + ")");
        }
    }
    return rep;
}

namespace detail {

// Weakly increasing object chains built from a strictly increasing base by
// duplicating at most maxRepeats positions; equal neighbours force identity
// inputs, so this confirms the unit relations as well.
inline std::vector<std::vector<int>> relation_chains(int m, int maxRepeats) {
    std::vector<std::vector<int>> chains;
    std::vector<int> subset;
    auto emitRepeats = [&](const std::vector<int>& base) {
        std::vector<std::vector<int>> cur{base};
        chains.push_back(base);
        for (int r = 0; r < maxRepeats; ++r) {
            std::vector<std::vector<int>> next;
            for (const auto& c : cur)
                for (std::size_t p = 0; p < c.size(); ++p) {
                    std::vector<int> e = c;
                    e.insert(e.begin() + p, c[p]);
                    // avoid emitting the same weakly increasing chain twice:
                    // only duplicate at the first position of an equal run
                    if (p > 0 && e[p - 1] == e[p])
                        continue;
                    next.push_back(e);
                    chains.push_back(e);
                }
            cur = std::move(next);
        }
    };
    auto rec = [&](auto&& self, int from) -> void {
        if (subset.size() >= 2)
            emitRepeats(subset);
        if (static_cast<int>(subset.size()) >= m)
            return;
        for (int j = from; j < m; ++j) {
            subset.push_back(j);
            self(self, j + 1);
            subset.pop_back();
        }
    };
    rec(rec, 0);
    // single-object chains exercise the pure unit relations
    for (int i = 0; i < m; ++i) {
        chains.push_back({i, i});
        chains.push_back({i, i, i});
    }
    return chains;
}

} // namespace detail

/// Evaluates every A∞ relation
///   sum_{j,k} mu(a^1..a^j, mu^k(a^{j+1}..a^{j+k}), a^{j+k+1}..a^d) = 0
/// (storage order) on every basis chain, including chains with identity
/// inputs. Violations list the chain and the nonzero residual.
inline ValidationReport validate_ainf(const AInfCategory& cat) {
    ValidationReport rep = validate_directed(cat);
    if (!rep.ok())
        return rep;
    const int m = cat.num_objects();
    for (const auto& chain : detail::relation_chains(m, 2)) {
        const int d = static_cast<int>(chain.size()) - 1;
        // Enumerate input tuples; identity inputs are forced at plateaus.
        std::vector<MuArg> tuple(d);
        auto run = [&](auto&& self, int pos) -> void {
            if (pos == d) {
                MuVal total;
                for (int k = 1; k <= d; ++k)
                    for (int j = 0; j + k <= d; ++j) {
                        std::vector<int> innerChain(chain.begin() + j, chain.begin() + j + k + 1);
                        std::vector<MuArg> innerArgs(tuple.begin() + j, tuple.begin() + j + k);
                        MuVal inner = eval_mu_basis(cat, innerChain, innerArgs);
                        if (inner.zero())
                            continue;
                        std::vector<int> outerChain;
                        std::vector<MuVal> outerArgs;
                        for (int v = 0; v <= j; ++v)
                            outerChain.push_back(chain[v]);
                        for (int v = j + k; v <= d; ++v)
                            outerChain.push_back(chain[v]);
                        for (int v = 0; v < j; ++v)
                            outerArgs.push_back(tuple[v].isId ? MuVal{true, {}}
                                                              : MuVal{false, {tuple[v].idx}});
                        outerArgs.push_back(inner);
                        for (int v = j + k; v < d; ++v)
                            outerArgs.push_back(tuple[v].isId ? MuVal{true, {}}
                                                              : MuVal{false, {tuple[v].idx}});
                        total.xor_with(eval_mu(cat, outerChain, outerArgs));
                    }
                if (!total.zero()) {
                    std::ostringstream os;
                    os << "A-infinity relation fails on chain " << detail::chain_str(chain)
                       << " inputs [";
                    for (int v = 0; v < d; ++v) {
                        if (v)
                            os << ",";
                        if (tuple[v].isId)
                            os << "id";
                        else
                            os << cat.hom(chain[v], chain[v + 1]).label(tuple[v].idx);
                    }
                    os << "], residual {";
                    const GradedSpace& ht = cat.hom(chain.front(), chain.back());
                    bool first = true;
                    if (total.idCoeff) {
                        os << "id";
                        first = false;
                    }
                    for (int o : total.set) {
                        os << (first ? "" : ",") << ht.label(o);
                        first = false;
                    }
                    os << "}";
                    rep.violations.push_back(os.str());
                }
                return;
            }
            if (chain[pos] == chain[pos + 1]) {
                tuple[pos] = MuArg::id();
                self(self, pos + 1);
                return;
            }
            const GradedSpace& h = cat.hom(chain[pos], chain[pos + 1]);
            for (int i = 0; i < h.dim(); ++i) {
                tuple[pos] = MuArg::basis(i);
                self(self, pos + 1);
            }
        };
        run(run, 0);
    }
    return rep;
}

// ---------------------------------------------------------------------------

/// mu^1 on hom(i,k) as a degree-1 GradedMap.
inline GradedMap hom_mu1(const AInfCategory& cat, int i, int k) {
    const GradedSpace& h = cat.hom(i, k);
    return GradedMap::from_action(h, h, 1, [&](int b) {
        return eval_mu_basis(cat, {i, k}, {MuArg::basis(b)}).set;
    });
}

/// Dims of H(hom(i,k), mu^1).
inline std::map<int, int> hom_cohomology(const AInfCategory& cat, int i, int k) {
    if (i < 0 || k >= cat.num_objects() || i >= k)
        throw std::out_of_range("hom_cohomology: need 0 <= i < k < m");
    return cohomology_dims(cat.hom(i, k), hom_mu1(cat, i, k));
}

/// Euler (Gram) matrix: chi_{ik} = sum_r (-1)^r dim H^r(hom(X^i,X^k)) above
/// the diagonal, 1 on it, 0 below.
inline std::vector<std::vector<long long>> gram_matrix(const AInfCategory& cat) {
    const int m = cat.num_objects();
    std::vector<std::vector<long long>> g(m, std::vector<long long>(m, 0));
    for (int i = 0; i < m; ++i)
        g[i][i] = 1;
    for (int i = 0; i < m; ++i)
        for (int k = i + 1; k < m; ++k)
            g[i][k] = euler_characteristic(hom_cohomology(cat, i, k));
    return g;
}

} // namespace ainfmut
