#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ainfmut/gf2.hpp"

namespace ainfmut {

/// GF(2) sum of basis elements, kept as a sorted index set; xor = symmetric difference.
using XorSet = std::vector<int>;

inline void xor_into(XorSet& a, const XorSet& b) {
    XorSet out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    a = std::move(out);
}

inline void xor_single(XorSet& a, int i) {
    auto it = std::lower_bound(a.begin(), a.end(), i);
    if (it != a.end() && *it == i)
        a.erase(it);
    else
        a.insert(it, i);
}

// ---------------------------------------------------------------------------
// Basis labels carry their provenance as decorations: "a∨" for duals and
// "a[k]" for shifts. Decorations cancel ("a∨∨" never appears, "[0]" is
// dropped), so dual and shift act as strict involutions / group actions on
// the stored data.

struct LabelParts {
    std::string base;
    bool dual = false;
    int shift = 0;
};

inline LabelParts label_parse(const std::string& s) {
    LabelParts p;
    std::string rest = s;
    if (!rest.empty() && rest.back() == ']') {
        auto open = rest.rfind('[');
        if (open != std::string::npos) {
            const std::string num = rest.substr(open + 1, rest.size() - open - 2);
            bool ok = !num.empty();
            std::size_t start = (num[0] == '-') ? 1 : 0;
            if (start == num.size())
                ok = false;
            for (std::size_t i = start; ok && i < num.size(); ++i)
                ok = num[i] >= '0' && num[i] <= '9';
            if (ok) {
                p.shift = std::stoi(num);
                rest = rest.substr(0, open);
            }
        }
    }
    static const std::string kVee = "∨"; // ∨
    if (rest.size() >= kVee.size() && rest.compare(rest.size() - kVee.size(), kVee.size(), kVee) == 0) {
        p.dual = true;
        rest = rest.substr(0, rest.size() - kVee.size());
    }
    p.base = rest;
    return p;
}

inline std::string label_render(const LabelParts& p) {
    std::string s = p.base;
    if (p.dual)
        s += "∨";
    if (p.shift != 0)
        s += "[" + std::to_string(p.shift) + "]";
    return s;
}

inline std::string label_dual(const std::string& s) {
    LabelParts p = label_parse(s);
    p.dual = !p.dual;
    p.shift = -p.shift;
    return label_render(p);
}

inline std::string label_shift(const std::string& s, int k) {
    if (k == 0)
        return s;
    LabelParts p = label_parse(s);
    p.shift += k;
    return label_render(p);
}

// ---------------------------------------------------------------------------

/// Finite-dimensional Z-graded vector space over GF(2) with a named, ordered basis.
class GradedSpace {
public:
    GradedSpace() = default;
    explicit GradedSpace(std::vector<std::pair<std::string, int>> basis) : basis_(std::move(basis)) {
        rebuild();
    }

    int dim() const { return static_cast<int>(basis_.size()); }
    bool empty() const { return basis_.empty(); }

    const std::string& label(int i) const { return basis_[i].first; }
    int degree(int i) const { return basis_[i].second; }
    const std::vector<std::pair<std::string, int>>& basis() const { return basis_; }

    std::map<int, int> dims() const {
        std::map<int, int> d;
        for (const auto& [lbl, deg] : basis_)
            ++d[deg];
        return d;
    }

    int dim_at(int deg) const {
        auto it = byDegree_.find(deg);
        return it == byDegree_.end() ? 0 : static_cast<int>(it->second.size());
    }

    // Global indices of the basis elements in one degree, in stored order.
    const std::vector<int>& indices_at(int deg) const {
        static const std::vector<int> kEmpty;
        auto it = byDegree_.find(deg);
        return it == byDegree_.end() ? kEmpty : it->second;
    }

    int pos_in_degree(int i) const { return posInDeg_[i]; }

    std::optional<int> find(const std::string& lbl) const {
        auto it = byLabel_.find(lbl);
        if (it == byLabel_.end())
            return std::nullopt;
        return it->second;
    }

    bool labels_unique() const { return byLabel_.size() == basis_.size(); }

    std::vector<int> degrees_present() const {
        std::vector<int> ds;
        for (const auto& [d, v] : byDegree_)
            ds.push_back(d);
        return ds;
    }

    bool operator==(const GradedSpace& o) const { return basis_ == o.basis_; }

private:
    void rebuild() {
        byDegree_.clear();
        byLabel_.clear();
        posInDeg_.assign(basis_.size(), 0);
        for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
            auto& bucket = byDegree_[basis_[i].second];
            posInDeg_[i] = static_cast<int>(bucket.size());
            bucket.push_back(i);
            byLabel_.emplace(basis_[i].first, i);
        }
    }

    std::vector<std::pair<std::string, int>> basis_;
    std::map<int, std::vector<int>> byDegree_;
    std::map<std::string, int> byLabel_;
    std::vector<int> posInDeg_;
};

inline GradedSpace dual(const GradedSpace& v) {
    std::vector<std::pair<std::string, int>> b;
    b.reserve(v.dim());
    for (const auto& [lbl, deg] : v.basis())
        b.emplace_back(label_dual(lbl), -deg);
    return GradedSpace(std::move(b));
}

/// shift(V, s): (V[s])^d = V^{d+s}, so content in degree d0 lands in d0 - s.
inline GradedSpace shift(const GradedSpace& v, int s) {
    if (s == 0)
        return v;
    std::vector<std::pair<std::string, int>> b;
    b.reserve(v.dim());
    for (const auto& [lbl, deg] : v.basis())
        b.emplace_back(label_shift(lbl, s), deg - s);
    return GradedSpace(std::move(b));
}

/// Tensor product; basis is ordered pairs, left factor major.
inline GradedSpace tensor(const GradedSpace& v, const GradedSpace& w) {
    std::vector<std::pair<std::string, int>> b;
    b.reserve(static_cast<std::size_t>(v.dim()) * w.dim());
    for (const auto& [lv, dv] : v.basis())
        for (const auto& [lw, dw] : w.basis())
            b.emplace_back("(" + lv + "," + lw + ")", dv + dw);
    return GradedSpace(std::move(b));
}

inline long long euler_characteristic(const std::map<int, int>& dims) {
    long long chi = 0;
    for (const auto& [deg, n] : dims)
        chi += (deg % 2 == 0) ? n : -n;
    return chi;
}

inline int total_dim(const std::map<int, int>& dims) {
    int t = 0;
    for (const auto& [deg, n] : dims)
        t += n;
    return t;
}

// ---------------------------------------------------------------------------

/// Degree-homogeneous linear map between graded spaces, one bit block per
/// source degree. blocks[k] maps source^k into target^{k+degree}.
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(GradedSpace source, GradedSpace target, int degree)
        : source_(std::move(source)), target_(std::move(target)), degree_(degree) {
        for (int d : source_.degrees_present())
            blocks_.emplace(d, gf2::BitMatrix(target_.dim_at(d + degree_), source_.dim_at(d)));
    }

    /// Build from an action on global basis indices; throws if the image of a
    /// basis element is not homogeneous of the right degree.
    template <class F>
    static GradedMap from_action(const GradedSpace& source, const GradedSpace& target, int degree,
                                 F&& act) {
        GradedMap m(source, target, degree);
        for (int i = 0; i < source.dim(); ++i) {
            const int sd = source.degree(i);
            XorSet img = act(i);
            for (int t : img) {
                if (target.degree(t) != sd + degree)
                    throw std::invalid_argument("GradedMap: inhomogeneous image of '" +
                                                source.label(i) + "'");
                m.blocks_.at(sd).set(target.pos_in_degree(t), source.pos_in_degree(i), true);
            }
        }
        return m;
    }

    static GradedMap zero(const GradedSpace& source, const GradedSpace& target, int degree) {
        return GradedMap(source, target, degree);
    }

    static GradedMap identity(const GradedSpace& v) {
        return from_action(v, v, 0, [](int i) { return XorSet{i}; });
    }

    const GradedSpace& source() const { return source_; }
    const GradedSpace& target() const { return target_; }
    int degree() const { return degree_; }
    const std::map<int, gf2::BitMatrix>& blocks() const { return blocks_; }

    const gf2::BitMatrix* block_at(int srcDeg) const {
        auto it = blocks_.find(srcDeg);
        return it == blocks_.end() ? nullptr : &it->second;
    }

    void set_entry(int tgtIdx, int srcIdx, bool v = true) {
        const int sd = source_.degree(srcIdx);
        if (target_.degree(tgtIdx) != sd + degree_)
            throw std::invalid_argument("GradedMap: entry outside the graded block");
        blocks_.at(sd).set(target_.pos_in_degree(tgtIdx), source_.pos_in_degree(srcIdx), v);
    }

    XorSet apply_basis(int srcIdx) const {
        const int sd = source_.degree(srcIdx);
        XorSet out;
        auto it = blocks_.find(sd);
        if (it == blocks_.end())
            return out;
        const auto& tset = target_.indices_at(sd + degree_);
        const int col = source_.pos_in_degree(srcIdx);
        for (std::size_t r = 0; r < it->second.rows(); ++r)
            if (it->second.get(r, col))
                out.push_back(tset[r]);
        std::sort(out.begin(), out.end());
        return out;
    }

    XorSet apply(const XorSet& x) const {
        XorSet out;
        for (int i : x)
            xor_into(out, apply_basis(i));
        return out;
    }

    bool is_zero() const {
        for (const auto& [d, b] : blocks_)
            if (!b.is_zero())
                return false;
        return true;
    }

    /// Per-degree ranks, keyed by source degree; degrees with no basis vectors
    /// are omitted.
    std::map<int, int> rank_per_degree() const {
        std::map<int, int> r;
        for (const auto& [d, b] : blocks_)
            r[d] = static_cast<int>(b.rank());
        return r;
    }

    int rank_total() const {
        int t = 0;
        for (const auto& [d, b] : blocks_)
            t += static_cast<int>(b.rank());
        return t;
    }

    bool operator==(const GradedMap& o) const {
        return source_ == o.source_ && target_ == o.target_ && degree_ == o.degree_ &&
               blocks_ == o.blocks_;
    }

private:
    GradedSpace source_, target_;
    int degree_ = 0;
    std::map<int, gf2::BitMatrix> blocks_;
};

inline GradedMap compose(const GradedMap& g, const GradedMap& f) {
    if (!(f.target() == g.source()))
        throw std::invalid_argument("compose: endpoint mismatch");
    return GradedMap::from_action(f.source(), g.target(), f.degree() + g.degree(),
                                  [&](int i) { return g.apply(f.apply_basis(i)); });
}

inline GradedMap add(const GradedMap& a, const GradedMap& b) {
    if (!(a.source() == b.source()) || !(a.target() == b.target()) || a.degree() != b.degree())
        throw std::invalid_argument("add: shape mismatch");
    return GradedMap::from_action(a.source(), a.target(), a.degree(), [&](int i) {
        XorSet s = a.apply_basis(i);
        xor_into(s, b.apply_basis(i));
        return s;
    });
}

/// Dual map: same degree, blocks are transposes indexed on the dual grading.
inline GradedMap dual(const GradedMap& m) {
    GradedSpace ds = dual(m.target());
    GradedSpace dt = dual(m.source());
    GradedMap out(ds, dt, m.degree());
    // (m^dual) block at degree k is the transpose of m's block at -k-degree.
    for (int k : ds.degrees_present()) {
        const gf2::BitMatrix* b = m.block_at(-k - m.degree());
        if (!b)
            continue;
        gf2::BitMatrix t = b->transposed();
        for (std::size_t r = 0; r < t.rows(); ++r)
            for (std::size_t c = 0; c < t.cols(); ++c)
                if (t.get(r, c)) {
                    int src = ds.indices_at(k)[c];
                    int tgt = dt.indices_at(k + m.degree())[r];
                    out.set_entry(tgt, src);
                }
    }
    return out;
}

inline GradedMap shift(const GradedMap& m, int s) {
    GradedSpace ss = shift(m.source(), s);
    GradedSpace st = shift(m.target(), s);
    return GradedMap::from_action(ss, st, m.degree(),
                                  [&](int i) { return m.apply_basis(i); });
}

/// Cohomology dims of (space, d) with d of degree +1 and d∘d = 0:
/// H^k = dim^k - rank(block k) - rank(block k-1).
inline std::map<int, int> cohomology_dims(const GradedSpace& space, const GradedMap& d) {
    if (d.degree() != 1)
        throw std::invalid_argument("cohomology_dims: differential must have degree 1");
    std::map<int, int> ranks = d.rank_per_degree();
    auto rk = [&](int k) {
        auto it = ranks.find(k);
        return it == ranks.end() ? 0 : it->second;
    };
    std::map<int, int> h;
    for (const auto& [deg, n] : space.dims()) {
        int v = n - rk(deg) - rk(deg - 1);
        if (v < 0)
            throw std::logic_error("cohomology_dims: negative dimension (d∘d != 0?)");
        if (v > 0)
            h[deg] = v;
    }
    return h;
}

// ---------------------------------------------------------------------------

/// A bounded cochain complex: ordered terms with degree-+1 differentials
/// between consecutive terms. d∘d = 0 is checked at construction.
class CochainComplex {
public:
    CochainComplex(std::vector<GradedSpace> terms, std::vector<GradedMap> diffs)
        : terms_(std::move(terms)), diffs_(std::move(diffs)) {
        if (!terms_.empty() && diffs_.size() + 1 != terms_.size())
            throw std::invalid_argument("CochainComplex: need one differential per consecutive pair");
        for (std::size_t p = 0; p < diffs_.size(); ++p) {
            if (!(diffs_[p].source() == terms_[p]) || !(diffs_[p].target() == terms_[p + 1]))
                throw std::invalid_argument("CochainComplex: differential " + std::to_string(p) +
                                            " has wrong endpoints");
            if (diffs_[p].degree() != 1)
                throw std::invalid_argument("CochainComplex: differential " + std::to_string(p) +
                                            " must have degree 1");
        }
        for (std::size_t p = 0; p + 1 < diffs_.size(); ++p)
            if (!compose(diffs_[p + 1], diffs_[p]).is_zero())
                throw std::invalid_argument("CochainComplex: d∘d != 0 at position " +
                                            std::to_string(p));
    }

    const std::vector<GradedSpace>& terms() const { return terms_; }
    const std::vector<GradedMap>& differentials() const { return diffs_; }

    /// Per-position cohomology dims (degree -> dim).
    std::vector<std::map<int, int>> cohomology() const {
        std::vector<std::map<int, int>> h(terms_.size());
        for (std::size_t p = 0; p < terms_.size(); ++p) {
            std::map<int, int> rOut = p < diffs_.size() ? diffs_[p].rank_per_degree()
                                                        : std::map<int, int>{};
            std::map<int, int> rIn = p > 0 ? diffs_[p - 1].rank_per_degree()
                                           : std::map<int, int>{};
            auto rk = [](const std::map<int, int>& m, int k) {
                auto it = m.find(k);
                return it == m.end() ? 0 : it->second;
            };
            for (const auto& [deg, n] : terms_[p].dims()) {
                int v = n - rk(rOut, deg) - rk(rIn, deg - 1);
                if (v < 0)
                    throw std::logic_error("CochainComplex: negative cohomology dimension");
                if (v > 0)
                    h[p][deg] = v;
            }
        }
        return h;
    }

    /// Total cohomology as one graded dimension table.
    std::map<int, int> total_cohomology() const {
        std::map<int, int> t;
        for (const auto& h : cohomology())
            for (const auto& [deg, n] : h)
                t[deg] += n;
        return t;
    }

private:
    std::vector<GradedSpace> terms_;
    std::vector<GradedMap> diffs_;
};

} // namespace ainfmut
