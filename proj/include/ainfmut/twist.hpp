#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ainfmut/ainf.hpp"

namespace ainfmut {

// ---------------------------------------------------------------------------
// Twisted complexes. A TwObject is a formal sum of shifted objects of a
// directed category with a degree-1 differential delta satisfying the
// Maurer-Cartan equation sum_d mu^d(delta,...,delta) = 0. Directedness keeps
// every such sum finite.
//
// Degree convention, fixed by the shift rule hom(X[s],Y[t]) = hom(X,Y)[t-s]:
// a component of internal degree d from summand (e, s_e) to summand (f, s_f)
// sits in total degree d + s_e - s_f.

struct Summand {
    int object = 0;
    int shift = 0;
    bool operator==(const Summand&) const = default;
};

/// Component space between two summands: the hom space for increasing object
/// pairs, the identity line for equal objects, zero for decreasing pairs.
inline int comp_dim(const AInfCategory& cat, int objE, int objF) {
    if (objE < objF)
        return cat.hom(objE, objF).dim();
    return objE == objF ? 1 : 0;
}

inline int comp_internal_degree(const AInfCategory& cat, int objE, int objF, int idx) {
    if (objE < objF)
        return cat.hom(objE, objF).degree(idx);
    return 0; // identity component
}

inline std::string comp_label(const AInfCategory& cat, int objE, int objF, int idx) {
    if (objE < objF)
        return cat.hom(objE, objF).label(idx);
    return "id";
}

using CompMap = std::map<std::pair<int, int>, XorSet>; // (e, f) -> component sum

struct TwObject {
    const AInfCategory* cat = nullptr;
    std::vector<Summand> summands;
    CompMap delta; // delta[(e,f)]: component from summand e to summand f

    bool operator==(const TwObject& o) const {
        return summands == o.summands && delta == o.delta;
    }
};

inline TwObject tw_single(const AInfCategory& cat, int object, int shiftBy = 0) {
    TwObject c;
    c.cat = &cat;
    c.summands = {{object, shiftBy}};
    return c;
}

inline TwObject tw_shift(TwObject c, int s) {
    for (Summand& x : c.summands)
        x.shift += s;
    return c;
}

/// A morphism of twisted complexes, stored componentwise. Value semantics:
/// the endpoints travel with the morphism.
struct TwMorphism {
    TwObject src, dst;
    CompMap comps;

    const XorSet* comp(int e, int f) const {
        auto it = comps.find({e, f});
        return it == comps.end() ? nullptr : &it->second;
    }

    void add_comp(int e, int f, int idx) {
        XorSet& c = comps[{e, f}];
        xor_single(c, idx);
        if (c.empty())
            comps.erase({e, f});
    }

    bool zero() const { return comps.empty(); }

    /// Total degree if homogeneous; throws when components disagree.
    std::optional<int> degree() const {
        std::optional<int> deg;
        const AInfCategory& cat = *src.cat;
        for (const auto& [ef, set] : comps) {
            const Summand& se = src.summands[ef.first];
            const Summand& sf = dst.summands[ef.second];
            for (int idx : set) {
                int t = comp_internal_degree(cat, se.object, sf.object, idx) + se.shift - sf.shift;
                if (deg && *deg != t)
                    throw EngineError("TwMorphism: inhomogeneous components");
                deg = t;
            }
        }
        return deg;
    }
};

inline TwMorphism delta_morphism(const TwObject& c) {
    TwMorphism d;
    d.src = c;
    d.dst = c;
    d.comps = c.delta;
    return d;
}

// ---------------------------------------------------------------------------
// mu on the additive enlargement: evaluate mu^D over all summand paths,
// expanding components multilinearly and applying the strict-unit rules.

namespace detail {

struct ArgRef {
    const TwObject* src;
    const TwObject* dst;
    const CompMap* comps;
};

inline void aplus_mu_accumulate(const AInfCategory& cat, const std::vector<ArgRef>& args,
                                CompMap& out) {
    const std::size_t D = args.size();
    std::vector<int> path(D + 1);          // summand index in each object
    std::vector<MuArg> elems(D);           // chosen component basis elements
    std::vector<int> objChain(D + 1);

    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == D) {
            objChain[0] = args[0].src->summands[path[0]].object;
            for (std::size_t v = 0; v < D; ++v)
                objChain[v + 1] = args[v].dst->summands[path[v + 1]].object;
            MuVal val = eval_mu_basis(cat, objChain, elems);
            if (val.zero())
                return;
            XorSet& slot = out[{path[0], path[D]}];
            if (val.idCoeff)
                xor_single(slot, 0);
            xor_into(slot, val.set);
            if (slot.empty())
                out.erase({path[0], path[D]});
            return;
        }
        const TwObject& next = *args[pos].dst;
        const int srcObj = args[pos].src->summands[path[pos]].object;
        auto it = args[pos].comps->lower_bound({path[pos], 0});
        for (; it != args[pos].comps->end() && it->first.first == path[pos]; ++it) {
            if (it->second.empty())
                continue;
            path[pos + 1] = it->first.second;
            const bool idLine = srcObj == next.summands[it->first.second].object;
            for (int idx : it->second) {
                elems[pos] = idLine ? MuArg::id() : MuArg::basis(idx);
                self(self, pos + 1);
            }
        }
    };

    const TwObject& first = *args[0].src;
    for (int s = 0; s < static_cast<int>(first.summands.size()); ++s) {
        path[0] = s;
        rec(rec, 0);
    }
}

} // namespace detail

/// mu^D of the additive enlargement applied to composable Tw morphisms
/// (storage order: first-applied first). Endpoint objects must agree.
inline TwMorphism aplus_mu(const AInfCategory& cat, const std::vector<const TwMorphism*>& ms) {
    if (ms.empty())
        throw EngineError("aplus_mu: empty argument list");
    TwMorphism out;
    out.src = ms.front()->src;
    out.dst = ms.back()->dst;
    std::vector<detail::ArgRef> args;
    args.reserve(ms.size());
    for (const TwMorphism* m : ms)
        args.push_back({&m->src, &m->dst, &m->comps});
    detail::aplus_mu_accumulate(cat, args, out.comps);
    return out;
}

/// mu^d of Tw: all ways of inserting deltas of the endpoints between the
/// arguments, capped by the arity bound of the underlying category.
inline TwMorphism tw_mu(const AInfCategory& cat, const std::vector<const TwMorphism*>& ts) {
    const int d = static_cast<int>(ts.size());
    if (d == 0)
        throw EngineError("tw_mu: empty argument list");
    TwMorphism out;
    out.src = ts.front()->src;
    out.dst = ts.back()->dst;

    const int cap = cat.max_arity();
    // Objects at the d+1 slots; slot v takes delta insertions of that object.
    std::vector<TwMorphism> deltas;
    deltas.reserve(d + 1);
    deltas.push_back(delta_morphism(ts.front()->src));
    for (int v = 0; v < d; ++v)
        deltas.push_back(delta_morphism(ts[v]->dst));

    std::vector<int> ins(d + 1, 0);
    auto emit = [&]() {
        std::vector<const TwMorphism*> seq;
        for (int v = 0; v <= d; ++v) {
            for (int j = 0; j < ins[v]; ++j)
                seq.push_back(&deltas[v]);
            if (v < d)
                seq.push_back(ts[v]);
        }
        std::vector<detail::ArgRef> args;
        args.reserve(seq.size());
        for (const TwMorphism* m : seq)
            args.push_back({&m->src, &m->dst, &m->comps});
        detail::aplus_mu_accumulate(cat, args, out.comps);
    };
    auto rec = [&](auto&& self, int slot, int budget) -> void {
        if (slot == d + 1) {
            emit();
            return;
        }
        for (int j = 0; j <= budget; ++j) {
            if (deltas[slot].zero() && j > 0)
                break;
            ins[slot] = j;
            self(self, slot + 1, budget - j);
        }
        ins[slot] = 0;
    };
    rec(rec, 0, cap - d);
    return out;
}

inline TwMorphism tw_mu1(const AInfCategory& cat, const TwMorphism& t) {
    return tw_mu(cat, {&t});
}

/// Maurer-Cartan check: sum_{D>=1} mu^D(delta,...,delta) componentwise.
inline ValidationReport mc_report(const TwObject& c) {
    ValidationReport rep;
    const AInfCategory& cat = *c.cat;
    TwMorphism d = delta_morphism(c);
    CompMap total;
    const int cap = cat.max_arity();
    if (!d.zero())
        for (int D = 1; D <= cap; ++D) {
            std::vector<detail::ArgRef> args(
                D, detail::ArgRef{&d.src, &d.dst, &d.comps});
            detail::aplus_mu_accumulate(cat, args, total);
        }
    for (const auto& [ef, set] : total)
        if (!set.empty()) {
            std::ostringstream os;
            os << "Maurer-Cartan residual between summands " << ef.first << " -> " << ef.second
               << " (" << set.size() << " term(s))";
            rep.violations.push_back(os.str());
        }
    return rep;
}

inline void assert_mc(const TwObject& c, const std::string& what) {
    ValidationReport rep = mc_report(c);
    if (!rep.ok())
        throw EngineError(what + ": Maurer-Cartan equation fails: " + rep.violations.front());
}

// ---------------------------------------------------------------------------
// Hom complexes.

/// Graded hom space between twisted complexes together with its differential
/// and the (source summand, target summand, component index) chart.
struct TwHom {
    TwObject src, dst;
    GradedSpace space;
    GradedMap d1;
    std::vector<std::tuple<int, int, int>> chart;  // basis order: (e, f, comp idx)
    std::map<std::tuple<int, int, int>, int> index; // inverse of chart

    TwMorphism element(const XorSet& x) const {
        TwMorphism t;
        t.src = src;
        t.dst = dst;
        for (int i : x) {
            auto [e, f, idx] = chart[i];
            t.add_comp(e, f, idx);
        }
        return t;
    }

    XorSet coords(const TwMorphism& t) const {
        XorSet out;
        for (const auto& [ef, set] : t.comps)
            for (int idx : set) {
                auto it = index.find({ef.first, ef.second, idx});
                if (it == index.end())
                    throw EngineError("TwHom::coords: component outside the chart");
                xor_single(out, it->second);
            }
        return out;
    }
};

/// Basis enumeration: target summand outer, source summand inner, component
/// basis in file order. Single-summand-to-single-summand spaces keep the
/// plain hom labels so that trivial extractions are identities on the nose.
inline TwHom hom_complex(const TwObject& c, const TwObject& d) {
    const AInfCategory& cat = *c.cat;
    TwHom h;
    h.src = c;
    h.dst = d;
    const bool plain = c.summands.size() == 1 && d.summands.size() == 1;
    std::vector<std::pair<std::string, int>> basis;
    for (int f = 0; f < static_cast<int>(d.summands.size()); ++f)
        for (int e = 0; e < static_cast<int>(c.summands.size()); ++e) {
            const Summand& se = c.summands[e];
            const Summand& sf = d.summands[f];
            const int n = comp_dim(cat, se.object, sf.object);
            for (int idx = 0; idx < n; ++idx) {
                std::string lbl = comp_label(cat, se.object, sf.object, idx);
                if (!plain)
                    lbl += "@" + std::to_string(e) + ">" + std::to_string(f);
                basis.emplace_back(lbl, comp_internal_degree(cat, se.object, sf.object, idx) +
                                            se.shift - sf.shift);
                h.index.emplace(std::make_tuple(e, f, idx),
                                static_cast<int>(h.chart.size()));
                h.chart.emplace_back(e, f, idx);
            }
        }
    h.space = GradedSpace(std::move(basis));
    h.d1 = GradedMap::from_action(h.space, h.space, 1, [&](int i) {
        auto [e, f, idx] = h.chart[i];
        TwMorphism t;
        t.src = c;
        t.dst = d;
        t.add_comp(e, f, idx);
        return h.coords(tw_mu1(cat, t));
    });
    return h;
}

inline std::map<int, int> tw_hom_cohomology(const TwObject& c, const TwObject& d) {
    TwHom h = hom_complex(c, d);
    return cohomology_dims(h.space, h.d1);
}

// ---------------------------------------------------------------------------
// Cones and twist objects.

/// Cone(a: C -> D): summands of C shifted by 1, then summands of D, with
/// delta = [[delta_C, 0], [a, delta_D]]. Requires a closed of total degree 0.
inline TwObject cone(const TwMorphism& a) {
    const AInfCategory& cat = *a.src.cat;
    std::optional<int> deg = a.degree();
    if (deg && *deg != 0)
        throw EngineError("cone: morphism must have total degree 0, got " + std::to_string(*deg));
    if (!tw_mu1(cat, a).zero())
        throw EngineError("cone: morphism is not closed");

    TwObject out;
    out.cat = &cat;
    const int nc = static_cast<int>(a.src.summands.size());
    for (const Summand& s : a.src.summands)
        out.summands.push_back({s.object, s.shift + 1});
    for (const Summand& s : a.dst.summands)
        out.summands.push_back(s);
    for (const auto& [ef, set] : a.src.delta)
        out.delta[{ef.first, ef.second}] = set;
    for (const auto& [ef, set] : a.comps)
        out.delta[{ef.first, nc + ef.second}] = set;
    for (const auto& [ef, set] : a.dst.delta)
        out.delta[{nc + ef.first, nc + ef.second}] = set;
    assert_mc(out, "cone");
    return out;
}

/// V (x) X for V = hom(X, Y) with differential mu^1: one copy X[-deg b] per
/// homogeneous basis vector b, delta components id-multiples from d1(V), and
/// the evaluation morphism with component b on summand b.
/// twist_object returns Cone(ev) = T_X(Y).
inline TwObject twist_object(const AInfCategory& cat, int x, const TwObject& y,
                             TwMorphism* evOut = nullptr) {
    TwObject xs = tw_single(cat, x);
    TwHom v = hom_complex(xs, y);

    TwObject vx;
    vx.cat = &cat;
    for (int b = 0; b < v.space.dim(); ++b)
        vx.summands.push_back({x, -v.space.degree(b)});
    for (int b = 0; b < v.space.dim(); ++b) {
        XorSet db = v.d1.apply_basis(b);
        for (int b2 : db)
            vx.delta[{b, b2}] = XorSet{0}; // id component, coefficient 1
    }
    assert_mc(vx, "twist_object: V(x)X");

    TwMorphism ev;
    ev.src = vx;
    ev.dst = y;
    for (int b = 0; b < v.space.dim(); ++b) {
        auto [e, f, idx] = v.chart[b];
        (void)e; // source is a single summand
        ev.add_comp(b, f, idx);
    }
    if (!tw_mu1(cat, ev).zero())
        throw EngineError("twist_object: evaluation morphism is not closed");

    TwObject t = cone(ev);
    if (evOut)
        *evOut = ev;
    return t;
}

/// Dual twist T'_X(Y) = Cone(Y -> hom(Y,X)^dual (x) X)[-1], realized as
/// summands of Y followed by one copy X[deg u - 1] per basis vector u of
/// hom(Y, X). Inverse of twist_object up to quasi-isomorphism; the shift is
/// calibrated by the r/r^{-1} round-trip fixtures.
inline TwObject dual_twist_object(const AInfCategory& cat, int x, const TwObject& y) {
    TwObject xs = tw_single(cat, x);
    TwHom v = hom_complex(y, xs);

    TwObject out;
    out.cat = &cat;
    const int ny = static_cast<int>(y.summands.size());
    out.summands = y.summands;
    for (int u = 0; u < v.space.dim(); ++u)
        out.summands.push_back({x, v.space.degree(u) - 1});
    for (const auto& [ef, set] : y.delta)
        out.delta[{ef.first, ef.second}] = set;
    // coevaluation: component of u on the u-summand, sourced at u's footprint in Y
    for (int u = 0; u < v.space.dim(); ++u) {
        auto [e, f, idx] = v.chart[u];
        (void)f; // target is a single summand
        XorSet& slot = out.delta[{e, ny + u}];
        xor_single(slot, idx);
        if (slot.empty())
            out.delta.erase({e, ny + u});
    }
    // dual differential between the X copies: component u1 -> u2 with
    // coefficient <u1, d1(u2)>
    for (int u2 = 0; u2 < v.space.dim(); ++u2) {
        XorSet du2 = v.d1.apply_basis(u2);
        for (int u1 : du2)
            out.delta[{ny + u1, ny + u2}] = XorSet{0};
    }
    assert_mc(out, "dual_twist_object");
    return out;
}

// ---------------------------------------------------------------------------
// Directed subcategory extraction.

/// Directed A∞-subcategory of Tw generated by the given objects: hom(Y^i,Y^k)
/// with all Tw compositions restricted to increasing chains, identities
/// adjoined implicitly. The result is validated.
inline AInfCategory extract_directed_subcategory(const AInfCategory& cat,
                                                 const std::vector<TwObject>& objs,
                                                 const std::vector<std::string>& names) {
    const int m = static_cast<int>(objs.size());
    if (static_cast<int>(names.size()) != m)
        throw EngineError("extract_directed_subcategory: one name per object required");
    for (const TwObject& o : objs)
        assert_mc(o, "extract_directed_subcategory: input");

    AInfCategory out;
    out.objectNames = names;

    std::map<std::pair<int, int>, TwHom> homs;
    for (int i = 0; i < m; ++i)
        for (int k = i + 1; k < m; ++k) {
            TwHom h = hom_complex(objs[i], objs[k]);
            if (!h.space.labels_unique()) {
                // adversarial label collisions get a deterministic suffix
                std::vector<std::pair<std::string, int>> fixed = h.space.basis();
                std::map<std::string, int> seen;
                for (auto& [lbl, deg] : fixed) {
                    int& n = seen[lbl];
                    if (n++)
                        lbl += "'" + std::to_string(n);
                }
                h.space = GradedSpace(std::move(fixed));
            }
            out.set_hom(i, k, h.space);
            homs.emplace(std::make_pair(i, k), std::move(h));
        }

    // mu^1 entries from the hom-complex differentials.
    for (auto& [ik, h] : homs) {
        for (int b = 0; b < h.space.dim(); ++b) {
            TwMorphism t;
            t.src = h.src;
            t.dst = h.dst;
            auto [e, f, idx] = h.chart[b];
            t.add_comp(e, f, idx);
            for (int o : h.coords(tw_mu1(cat, t)))
                out.add_mu({ik.first, ik.second}, {b}, o);
        }
    }

    // Higher entries: all strictly increasing chains, all basis tuples.
    std::vector<int> chain;
    auto emitChain = [&]() {
        const int d = static_cast<int>(chain.size()) - 1;
        std::vector<const TwHom*> hs(d);
        for (int v = 0; v < d; ++v)
            hs[v] = &homs.at({chain[v], chain[v + 1]});
        const TwHom& target = homs.at({chain.front(), chain.back()});
        std::vector<int> tuple(d);
        std::vector<TwMorphism> ms(d);
        auto rec = [&](auto&& self, int pos) -> void {
            if (pos == d) {
                std::vector<const TwMorphism*> ptrs(d);
                for (int v = 0; v < d; ++v)
                    ptrs[v] = &ms[v];
                TwMorphism r = tw_mu(cat, ptrs);
                if (r.zero())
                    return;
                for (int o : target.coords(r))
                    out.add_mu(chain, tuple, o);
                return;
            }
            for (int b = 0; b < hs[pos]->space.dim(); ++b) {
                tuple[pos] = b;
                ms[pos] = hs[pos]->element({b});
                self(self, pos + 1);
            }
        };
        if (d >= 1)
            rec(rec, 0);
    };
    auto chains = [&](auto&& self, int from) -> void {
        if (chain.size() >= 3)
            emitChain();
        for (int j = from; j < m; ++j) {
            chain.push_back(j);
            self(self, j + 1);
            chain.pop_back();
        }
    };
    chains(chains, 0);

    ValidationReport rep = validate_ainf(out);
    if (!rep.ok())
        throw EngineError("extract_directed_subcategory: output fails validation: " +
                          rep.violations.front());
    return out;
}

// ---------------------------------------------------------------------------
// Triangle Euler check.

struct TriangleReport {
    long long chiCone = 0, chiSrc = 0, chiDst = 0;
    int dimCone = 0, dimSrc = 0, dimDst = 0;
    bool eulerOk = false, boundOk = false;
    bool ok() const { return eulerOk && boundOk; }
};

/// For a closed degree-0 morphism a: C -> D and a probe P, checks the Euler
/// identity chi(H hom(P, Cone a)) = chi(H hom(P, D)) - chi(H hom(P, C)) and
/// the long-exact-sequence bound dim H(Cone) <= dim H(C-side) + dim H(D-side).
inline TriangleReport triangle_euler_check(const TwMorphism& a, const TwObject& probe) {
    TriangleReport r;
    TwObject cn = cone(a);
    std::map<int, int> hc = tw_hom_cohomology(probe, cn);
    std::map<int, int> hs = tw_hom_cohomology(probe, a.src);
    std::map<int, int> hd = tw_hom_cohomology(probe, a.dst);
    r.chiCone = euler_characteristic(hc);
    r.chiSrc = euler_characteristic(hs);
    r.chiDst = euler_characteristic(hd);
    r.dimCone = total_dim(hc);
    r.dimSrc = total_dim(hs);
    r.dimDst = total_dim(hd);
    r.eulerOk = r.chiCone == r.chiDst - r.chiSrc;
    r.boundOk = r.dimCone <= r.dimSrc + r.dimDst;
    return r;
}

} // namespace ainfmut
