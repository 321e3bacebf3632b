#include "minionlab/relaxations.hpp"

#include "minionlab/rng.hpp"

#include <algorithm>
#include <map>

namespace minionlab {

BasicLp build_basic_lp(const Structure& x, const Structure& y) {
    if (!x.similar_to(y))
        throw Error("basic lp: structures are not similar");
    BasicLp lp;
    const int nx = x.domain_size();
    const int ny = y.domain_size();

    lp.marginal_var.assign(nx, std::vector<int>(ny, -1));
    for (int v = 0; v < nx; ++v)
        for (int w = 0; w < ny; ++w)
            lp.marginal_var[v][w] = lp.system.add_var(true);
    for (int v = 0; v < nx; ++v) {
        std::vector<std::pair<int, Rational>> terms;
        for (int w = 0; w < ny; ++w)
            terms.push_back({lp.marginal_var[v][w], 1});
        lp.system.add(std::move(terms), Rel::eq, 1);
    }

    for (int r = 0; r < x.signature().size(); ++r) {
        const auto& xrel = x.relation(r);
        const auto& yrel = y.relation(r);
        const int ar = x.signature().arity(r);
        for (int xt = 0; xt < static_cast<int>(xrel.size()); ++xt) {
            std::vector<int> weights(yrel.size());
            for (int yt = 0; yt < static_cast<int>(yrel.size()); ++yt) {
                int var = lp.system.add_var(true);
                weights[yt] = var;
                lp.weight_var[{r, xt, yt}] = var;
            }
            std::vector<std::pair<int, Rational>> sum_terms;
            for (int var : weights)
                sum_terms.push_back({var, 1});
            lp.system.add(std::move(sum_terms), Rel::eq, 1);

            for (int i = 0; i < ar; ++i) {
                for (int w = 0; w < ny; ++w) {
                    std::vector<std::pair<int, Rational>> terms;
                    for (int yt = 0; yt < static_cast<int>(yrel.size()); ++yt)
                        if (yrel[yt][i] == w)
                            terms.push_back({weights[yt], 1});
                    terms.push_back({lp.marginal_var[xrel[xt][i]][w], -1});
                    lp.system.add(std::move(terms), Rel::eq, 0);
                }
            }
        }
    }
    return lp;
}

namespace {

// Support propagation seeded by one pinned tuple assignment: any feasible
// LP point induces arc-consistent supports, so a wipeout proves the pinned
// LP infeasible without running the simplex.
bool supports_survive(const Structure& x, const Structure& y,
                      const Assignment& pin,
                      const std::set<Assignment>& removed) {
    const int nx = x.domain_size();
    const int ny = y.domain_size();
    std::vector<std::vector<char>> cand(nx, std::vector<char>(ny, 1));
    const Tuple& xt = x.relation(pin.rel)[pin.xt];
    const Tuple& yt = y.relation(pin.rel)[pin.yt];
    for (std::size_t i = 0; i < xt.size(); ++i)
        for (int w = 0; w < ny; ++w)
            cand[xt[i]][w] = (w == yt[i]) ? cand[xt[i]][w] : 0;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < x.signature().size(); ++r) {
            const auto& xrel = x.relation(r);
            const auto& yrel = y.relation(r);
            const int ar = x.signature().arity(r);
            for (int ti = 0; ti < static_cast<int>(xrel.size()); ++ti) {
                std::vector<std::vector<char>> support(
                    ar, std::vector<char>(ny, 0));
                bool any = false;
                for (int tj = 0; tj < static_cast<int>(yrel.size()); ++tj) {
                    if (removed.count({r, ti, tj}))
                        continue;
                    bool ok = true;
                    for (int i = 0; i < ar && ok; ++i)
                        ok = cand[xrel[ti][i]][yrel[tj][i]];
                    if (!ok)
                        continue;
                    any = true;
                    for (int i = 0; i < ar; ++i)
                        support[i][yrel[tj][i]] = 1;
                }
                if (!any)
                    return false;
                for (int i = 0; i < ar; ++i)
                    for (int w = 0; w < ny; ++w)
                        if (cand[xrel[ti][i]][w] && !support[i][w]) {
                            cand[xrel[ti][i]][w] = 0;
                            changed = true;
                        }
            }
        }
        for (int v = 0; v < nx; ++v) {
            bool any = false;
            for (int w = 0; w < ny; ++w)
                any = any || cand[v][w];
            if (!any)
                return false;
        }
    }
    return true;
}

// A homomorphism consistent with the pin whose induced tuple assignments
// avoid the removed set is an integral LP point, so finding one proves the
// pinned LP feasible.
bool pinned_hom_exists(const Structure& x, const Structure& y,
                       const Assignment& pin,
                       const std::set<Assignment>& removed,
                       std::uint64_t budget) {
    const Tuple& xt = x.relation(pin.rel)[pin.xt];
    const Tuple& yt = y.relation(pin.rel)[pin.yt];
    std::vector<std::pair<int, int>> pins;
    for (std::size_t i = 0; i < xt.size(); ++i)
        pins.push_back({xt[i], yt[i]});
    std::map<int, int> seen;
    for (auto [v, w] : pins) {
        auto it = seen.find(v);
        if (it != seen.end() && it->second != w)
            return false;  // repeated vertex pinned to two values
        seen[v] = w;
    }
    HomSearchResult res = find_homomorphism(x, y, budget, pins);
    if (res.status != HomStatus::found)
        return false;
    const auto& map = res.hom->map;
    for (int r = 0; r < x.signature().size(); ++r) {
        const auto& xrel = x.relation(r);
        const auto& yrel = y.relation(r);
        for (int ti = 0; ti < static_cast<int>(xrel.size()); ++ti) {
            Tuple image(xrel[ti].size());
            for (std::size_t i = 0; i < image.size(); ++i)
                image[i] = map[xrel[ti][i]];
            auto it = std::lower_bound(yrel.begin(), yrel.end(), image);
            int tj = static_cast<int>(it - yrel.begin());
            if (removed.count({r, ti, tj}))
                return false;  // integral point puts weight on a removed pair
        }
    }
    return true;
}

} // namespace

ClpReport clp_relax(const Structure& x, const Structure& y,
                    const RelaxConfig& config) {
    if (!x.similar_to(y))
        throw Error("clp_relax: structures are not similar");

    ClpReport report;
    std::vector<Assignment> all;
    for (int r = 0; r < x.signature().size(); ++r)
        for (int xt = 0; xt < static_cast<int>(x.relation(r).size()); ++xt)
            for (int yt = 0; yt < static_cast<int>(y.relation(r).size()); ++yt)
                all.push_back({r, xt, yt});
    if (config.permute_order) {
        Rng rng(config.order_seed);
        for (int i = static_cast<int>(all.size()) - 1; i > 0; --i)
            std::swap(all[i], all[static_cast<int>(rng.next() % (i + 1))]);
    }

    std::set<Assignment> surviving(all.begin(), all.end());
    std::set<Assignment> removed;

    BasicLp base = build_basic_lp(x, y);

    bool any_removed = true;
    while (any_removed) {
        any_removed = false;
        for (const Assignment& a : all) {
            if (!surviving.count(a))
                continue;
            bool feasible;
            if (config.use_shortcuts &&
                pinned_hom_exists(x, y, a, removed, config.shortcut_budget)) {
                feasible = true;
                ++report.shortcut_hits;
            } else if (config.use_shortcuts && !supports_survive(x, y, a, removed)) {
                feasible = false;
                ++report.shortcut_hits;
            } else {
                LinearSystem sys = base.system;
                sys.add({{base.weight_var.at(a), 1}}, Rel::eq, 1);
                for (const Assignment& r : removed)
                    sys.add({{base.weight_var.at(r), 1}}, Rel::eq, 0);
                feasible = lp_feasible(sys).feasible;
                ++report.lp_solves;
            }
            if (!feasible) {
                surviving.erase(a);
                removed.insert(a);
                any_removed = true;
            }
        }
    }

    for (int r = 0; r < x.signature().size(); ++r) {
        for (int xt = 0; xt < static_cast<int>(x.relation(r).size()); ++xt) {
            bool keeps_one = false;
            for (int yt = 0; yt < static_cast<int>(y.relation(r).size()); ++yt)
                keeps_one = keeps_one || surviving.count({r, xt, yt});
            if (!keeps_one) {
                report.accepted = false;
                report.emptied = {r, xt};
                report.surviving = std::move(surviving);
                return report;
            }
        }
    }
    report.accepted = true;
    report.surviving = std::move(surviving);
    return report;
}

ConsistencyReport k_consistency(const Structure& x, const Structure& y, int k,
                                const ConsistencyCaps& caps) {
    if (!x.similar_to(y))
        throw Error("k_consistency: structures are not similar");
    if (k < 1)
        throw Error("k_consistency: k must be positive");
    if (x.domain_size() > caps.max_domain)
        throw Error("k_consistency: domain cap exceeded");

    const int nx = x.domain_size();
    const int ny = y.domain_size();

    // enumerate subsets of size <= k
    std::vector<std::vector<int>> subsets;
    std::vector<int> current;
    auto gen = [&](auto&& self, int from) -> void {
        if (static_cast<int>(current.size()) <= k)
            subsets.push_back(current);
        if (static_cast<int>(current.size()) == k)
            return;
        for (int v = from; v < nx; ++v) {
            current.push_back(v);
            self(self, v + 1);
            current.pop_back();
        }
    };
    gen(gen, 0);

    std::map<std::vector<int>, int> subset_index;
    for (std::size_t s = 0; s < subsets.size(); ++s)
        subset_index[subsets[s]] = static_cast<int>(s);

    // a partial map on subset s is a value vector aligned with subsets[s]
    auto partial_ok = [&](const std::vector<int>& dom, const std::vector<int>& val) {
        for (int r = 0; r < x.signature().size(); ++r) {
            for (const Tuple& t : x.relation(r)) {
                Tuple image(t.size());
                bool covered = true;
                for (std::size_t i = 0; i < t.size() && covered; ++i) {
                    auto it = std::lower_bound(dom.begin(), dom.end(), t[i]);
                    if (it == dom.end() || *it != t[i])
                        covered = false;
                    else
                        image[i] = val[it - dom.begin()];
                }
                if (covered &&
                    !std::binary_search(y.relation(r).begin(), y.relation(r).end(),
                                        image))
                    return false;
            }
        }
        return true;
    };

    std::vector<std::set<std::vector<int>>> family(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        const auto& dom = subsets[s];
        if (dom.empty()) {
            family[s].insert(std::vector<int>{});
            continue;
        }
        std::vector<int> val(dom.size(), 0);
        while (true) {
            if (partial_ok(dom, val))
                family[s].insert(val);
            int pos = static_cast<int>(val.size()) - 1;
            while (pos >= 0 && ++val[pos] == ny)
                val[pos--] = 0;
            if (pos < 0)
                break;
        }
    }

    // extension witness on dom + {v}: a partial homomorphism extending the
    // map whose size <= k restrictions all survive. For |dom| < k the
    // witness itself must survive; for |dom| = k it lives one vertex above
    // the family and only its one-coordinate restrictions are consulted.
    auto has_witness = [&](const std::vector<int>& dom, const std::vector<int>& val,
                           int v) {
        std::vector<int> edom = dom;
        auto pos_it = std::lower_bound(edom.begin(), edom.end(), v);
        std::size_t at = pos_it - edom.begin();
        edom.insert(pos_it, v);
        for (int w = 0; w < ny; ++w) {
            std::vector<int> eval = val;
            eval.insert(eval.begin() + static_cast<long>(at), w);
            if (static_cast<int>(edom.size()) <= k) {
                if (family[subset_index.at(edom)].count(eval))
                    return true;
                continue;
            }
            if (!partial_ok(edom, eval))
                continue;
            bool restrictions_alive = true;
            for (std::size_t drop = 0; drop < edom.size() && restrictions_alive;
                 ++drop) {
                std::vector<int> sdom, sval;
                for (std::size_t i = 0; i < edom.size(); ++i)
                    if (i != drop) {
                        sdom.push_back(edom[i]);
                        sval.push_back(eval[i]);
                    }
                restrictions_alive =
                    family[subset_index.at(sdom)].count(sval) > 0;
            }
            if (restrictions_alive)
                return true;
        }
        return false;
    };

    ConsistencyReport report;
    bool changed = true;
    while (changed) {
        changed = false;
        ++report.rounds;
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            const auto& dom = subsets[s];
            for (auto it = family[s].begin(); it != family[s].end();) {
                bool keep = true;
                // restriction closure: drop each coordinate in turn
                for (std::size_t drop = 0; drop < dom.size() && keep; ++drop) {
                    std::vector<int> sdom, sval;
                    for (std::size_t i = 0; i < dom.size(); ++i)
                        if (i != drop) {
                            sdom.push_back(dom[i]);
                            sval.push_back((*it)[i]);
                        }
                    keep = family[subset_index.at(sdom)].count(sval) > 0;
                }
                // extension closure: one more vertex, witnesses up to k+1
                for (int v = 0; v < nx && keep; ++v) {
                    if (std::binary_search(dom.begin(), dom.end(), v))
                        continue;
                    keep = has_witness(dom, *it, v);
                }
                if (keep) {
                    ++it;
                } else {
                    it = family[s].erase(it);
                    changed = true;
                }
            }
        }
    }

    std::size_t total = 0;
    for (const auto& f : family)
        total += f.size();
    report.family_size = total;
    report.consistent = total > 0;
    return report;
}

} // namespace minionlab
