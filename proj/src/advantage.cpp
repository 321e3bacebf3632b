#include "minionlab/advantage.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace minionlab {

namespace {

struct IdentityTable {
    // enumerations per arity (index 0 holds arity 1)
    std::vector<std::vector<std::vector<int>>> functions;
    std::vector<std::map<std::vector<int>, int>> lookup;
    std::vector<MinorIdentity> identities;
};

IdentityTable build_identities(const Structure& y, const Structure& yprime,
                               int max_arity, const DictatorSearchCaps& caps) {
    IdentityTable table;
    for (int a = 1; a <= max_arity; ++a) {
        PolymorphismSet set = enumerate_polymorphisms(y, yprime, a, caps.poly);
        if (set.functions.size() > caps.max_functions_per_arity)
            throw Error("dictator search: enumeration cap exceeded");
        std::map<std::vector<int>, int> lut;
        for (std::size_t f = 0; f < set.functions.size(); ++f)
            lut[set.functions[f]] = static_cast<int>(f);
        table.functions.push_back(std::move(set.functions));
        table.lookup.push_back(std::move(lut));
    }
    const int base = y.domain_size();
    for (int a = 1; a <= max_arity; ++a) {
        for (int ap = 1; ap <= max_arity; ++ap) {
            // all maps [a] -> [ap]
            std::vector<int> image(a, 0);
            while (true) {
                MinorMap pi(a, ap, image);
                for (std::size_t f = 0; f < table.functions[a - 1].size(); ++f) {
                    std::vector<int> minored = function_minor(
                        table.functions[a - 1][f], base, a, image, ap);
                    auto it = table.lookup[ap - 1].find(minored);
                    if (it == table.lookup[ap - 1].end())
                        throw Error("dictator search: enumeration is not "
                                    "minor-closed");
                    table.identities.push_back(
                        {a, static_cast<int>(f), pi, it->second});
                }
                int pos = a - 1;
                while (pos >= 0 && ++image[pos] == ap)
                    image[pos--] = 0;
                if (pos < 0)
                    break;
            }
        }
    }
    return table;
}

// Propagation-plus-backtracking satisfiability of a set of identities over
// index choices. Domains are small bitmasks (arity <= 30); the search is
// iterative with an undo trail, so neither stack depth nor memory grows with
// the number of enumerated functions.
class IdentitySolver {
public:
    IdentitySolver(const IdentityTable& table,
                   const std::vector<const MinorIdentity*>& identities)
        : table_(table), identities_(identities) {
        var_offset_.resize(table.functions.size() + 1, 0);
        for (std::size_t a = 0; a < table.functions.size(); ++a)
            var_offset_[a + 1] =
                var_offset_[a] + static_cast<int>(table.functions[a].size());
        by_source_.resize(var_offset_.back());
        by_target_.resize(var_offset_.back());
        for (const MinorIdentity* id : identities_) {
            by_source_[var(id->arity, id->function)].push_back(id);
            by_target_[var(pi_target(*id), id->minor_function)].push_back(id);
        }
    }

    std::optional<std::vector<int>> solve() {
        std::vector<unsigned> domains(var_offset_.back());
        for (std::size_t a = 0; a < table_.functions.size(); ++a)
            for (std::size_t f = 0; f < table_.functions[a].size(); ++f)
                domains[var(static_cast<int>(a) + 1, static_cast<int>(f))] =
                    (1u << (a + 1)) - 1;

        std::vector<std::pair<int, unsigned>> trail;
        if (!propagate_all(domains, trail))
            return std::nullopt;

        struct Decision {
            int var;
            unsigned untried;
            std::size_t mark;
        };
        std::vector<Decision> decisions;
        bool need_branch = true;
        for (;;) {
            if (need_branch) {
                // variables before the last decision stay singletons along
                // this branch, so the scan can resume there
                int from = decisions.empty() ? 0 : decisions.back().var;
                int branch = -1;
                for (int v = from; v < static_cast<int>(domains.size()); ++v)
                    if (__builtin_popcount(domains[v]) > 1) {
                        branch = v;
                        break;
                    }
                if (branch < 0) {
                    std::vector<int> out(domains.size());
                    for (std::size_t v = 0; v < domains.size(); ++v)
                        out[v] = __builtin_ctz(domains[v]);
                    return out;
                }
                decisions.push_back({branch, domains[branch], trail.size()});
            }
            Decision& d = decisions.back();
            while (trail.size() > d.mark) {
                domains[trail.back().first] = trail.back().second;
                trail.pop_back();
            }
            if (d.untried == 0) {
                decisions.pop_back();
                if (decisions.empty())
                    return std::nullopt;
                need_branch = false;
                continue;
            }
            int bit = __builtin_ctz(d.untried);
            d.untried &= d.untried - 1;
            trail.push_back({d.var, domains[d.var]});
            domains[d.var] = 1u << bit;
            std::vector<int> queue{d.var};
            need_branch = propagate(domains, queue, trail);
        }
    }

    int var(int arity, int fn) const { return var_offset_[arity - 1] + fn; }

private:
    static int pi_target(const MinorIdentity& id) { return id.pi.target_arity(); }

    bool revise(const MinorIdentity& id, std::vector<unsigned>& domains,
                std::vector<int>& touched,
                std::vector<std::pair<int, unsigned>>& trail) {
        int src = var(id.arity, id.function);
        int dst = var(pi_target(id), id.minor_function);
        unsigned src_dom = domains[src];
        unsigned dst_allowed = 0;
        for (int i = 0; i < id.arity; ++i)
            if (src_dom & (1u << i))
                dst_allowed |= 1u << id.pi(i);
        unsigned new_dst = domains[dst] & dst_allowed;
        if (new_dst != domains[dst]) {
            trail.push_back({dst, domains[dst]});
            domains[dst] = new_dst;
            touched.push_back(dst);
        }
        unsigned src_allowed = 0;
        for (int i = 0; i < id.arity; ++i)
            if (domains[dst] & (1u << id.pi(i)))
                src_allowed |= 1u << i;
        unsigned new_src = domains[src] & src_allowed;
        if (new_src != domains[src]) {
            trail.push_back({src, domains[src]});
            domains[src] = new_src;
            touched.push_back(src);
        }
        return domains[src] != 0 && domains[dst] != 0;
    }

    bool propagate_all(std::vector<unsigned>& domains,
                       std::vector<std::pair<int, unsigned>>& trail) {
        std::vector<int> queue;
        for (std::size_t v = 0; v < domains.size(); ++v)
            queue.push_back(static_cast<int>(v));
        return propagate(domains, queue, trail);
    }

    bool propagate(std::vector<unsigned>& domains, std::vector<int>& queue,
                   std::vector<std::pair<int, unsigned>>& trail) {
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            std::vector<int> touched;
            for (const MinorIdentity* id : by_source_[v])
                if (!revise(*id, domains, touched, trail))
                    return false;
            for (const MinorIdentity* id : by_target_[v])
                if (!revise(*id, domains, touched, trail))
                    return false;
            for (int t : touched)
                queue.push_back(t);
        }
        return true;
    }

    const IdentityTable& table_;
    std::vector<const MinorIdentity*> identities_;
    std::vector<int> var_offset_;
    std::vector<std::vector<const MinorIdentity*>> by_source_;
    std::vector<std::vector<const MinorIdentity*>> by_target_;
};

bool subset_satisfiable(const IdentityTable& table,
                        const std::vector<const MinorIdentity*>& subset) {
    return IdentitySolver(table, subset).solve().has_value();
}

} // namespace

DictatorSearchResult bounded_dictator_search(const Structure& y,
                                             const Structure& yprime,
                                             int max_arity,
                                             const DictatorSearchCaps& caps) {
    if (max_arity < 1)
        throw Error("dictator search: arity bound must be positive");
    IdentityTable table = build_identities(y, yprime, max_arity, caps);

    DictatorSearchResult result;
    for (const auto& fns : table.functions)
        result.enumeration_sizes.push_back(fns.size());

    std::vector<const MinorIdentity*> all;
    for (const MinorIdentity& id : table.identities)
        all.push_back(&id);

    IdentitySolver solver(table, all);
    auto solution = solver.solve();
    if (solution) {
        DictatorAssignment assignment;
        assignment.max_arity = max_arity;
        assignment.choice.resize(max_arity);
        for (int a = 1; a <= max_arity; ++a) {
            assignment.choice[a - 1].resize(table.functions[a - 1].size());
            for (std::size_t f = 0; f < table.functions[a - 1].size(); ++f)
                assignment.choice[a - 1][f] =
                    (*solution)[solver.var(a, static_cast<int>(f))];
        }
        result.satisfiable = true;
        result.assignment = std::move(assignment);
        return result;
    }

    // deletion-based minimization of the inconsistent identity set
    std::vector<const MinorIdentity*> core = all;
    for (std::size_t k = 0; k < core.size();) {
        std::vector<const MinorIdentity*> trial = core;
        trial.erase(trial.begin() + static_cast<long>(k));
        if (!subset_satisfiable(table, trial))
            core = std::move(trial);
        else
            ++k;
    }
    for (const MinorIdentity* id : core)
        result.conflict.push_back(*id);
    return result;
}

bool verify_dictator_assignment(const Structure& y, const Structure& yprime,
                                const DictatorAssignment& assignment,
                                const DictatorSearchCaps& caps) {
    IdentityTable table = build_identities(y, yprime, assignment.max_arity, caps);
    for (std::size_t a = 0; a < table.functions.size(); ++a)
        if (assignment.choice.size() <= a ||
            assignment.choice[a].size() != table.functions[a].size())
            return false;
    for (const MinorIdentity& id : table.identities) {
        int chosen = assignment.choice[id.arity - 1][id.function];
        int target = assignment.choice[id.pi.target_arity() - 1][id.minor_function];
        if (target != id.pi(chosen))
            return false;
    }
    return true;
}

namespace {

std::string describe(const Structure& s) {
    std::string out = "domain=" + std::to_string(s.domain_size());
    for (int r = 0; r < s.signature().size(); ++r)
        out += " " + s.signature().name(r) + "=" +
               std::to_string(s.relation(r).size());
    return out;
}

std::optional<int> clique_order(const Structure& g) {
    if (!is_graph(g))
        return std::nullopt;
    const int n = g.domain_size();
    if (g.relation(0).size() != static_cast<std::size_t>(n) * (n - 1))
        return std::nullopt;
    return n;
}

bool matches_boolean_ternary(const Structure& s, const Structure& reference) {
    if (s.domain_size() != 2 || !s.similar_to(reference))
        return false;
    if (s.signature().size() != 1 || s.signature().arity(0) != 3)
        return false;
    for (int flip = 0; flip < 2; ++flip) {
        std::vector<Tuple> mapped;
        for (const Tuple& t : s.relation(0)) {
            Tuple m(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                m[i] = flip ? 1 - t[i] : t[i];
            mapped.push_back(m);
        }
        std::sort(mapped.begin(), mapped.end());
        if (mapped == reference.relation(0))
            return true;
    }
    return false;
}

} // namespace

AdvantageVerdict classify_graph(const Structure& g, int dimension) {
    if (!is_graph(g))
        throw Error("classify_graph: input is not a graph");
    if (dimension < 1)
        throw Error("classify_graph: dimension must be positive");
    AdvantageVerdict verdict;
    verdict.subject = describe(g);
    verdict.dimension = dimension;
    if (dimension <= 2) {
        verdict.verdict = Verdict::no_advantage;
        verdict.justification = {"low-dimensional-space",
                                 "no structure separates quantum from classical "
                                 "homomorphisms over spaces of dimension at most 2"};
        return verdict;
    }
    if (is_bipartite(g).bipartite) {
        verdict.verdict = Verdict::no_advantage;
        verdict.justification = {"bipartite-graph",
                                 "bipartite graph templates have bounded width, "
                                 "which rules out a quantum-classical gap"};
    } else {
        verdict.verdict = Verdict::advantage;
        verdict.justification = {"nonbipartite-graph",
                                 "non-bipartite graph templates are NP-complete "
                                 "(Hell-Nesetril), which forces a gap in "
                                 "dimension 3 and higher"};
    }
    return verdict;
}

AdvantageVerdict classify_pair(const Structure& y, const Structure& yprime,
                               int dimension, const PairClassifyConfig& config) {
    if (!y.similar_to(yprime))
        throw Error("classify_pair: structures are not similar");
    if (dimension < 1)
        throw Error("classify_pair: dimension must be positive");
    HomSearchResult hom = find_homomorphism(y, yprime, config.hom_budget);
    if (hom.status != HomStatus::found)
        throw Error("classify_pair: could not verify a homomorphism from the "
                    "first structure to the second");

    AdvantageVerdict verdict;
    verdict.subject = "(" + describe(y) + ") -> (" + describe(yprime) + ")";
    verdict.dimension = dimension;

    if (dimension <= 2) {
        verdict.verdict = Verdict::no_advantage;
        verdict.justification = {"low-dimensional-space",
                                 "no pair separates quantum from classical "
                                 "homomorphisms over spaces of dimension at most 2"};
        return verdict;
    }

    if (matches_boolean_ternary(y, zoo("one_in_three")) &&
        matches_boolean_ternary(yprime, zoo("nae"))) {
        verdict.verdict = Verdict::no_advantage;
        verdict.justification = {"one-in-three-vs-nae",
                                 "the semidefinite relaxation solves the "
                                 "1-in-3 / not-all-equal promise template, so a "
                                 "quantum witness always yields a classical one"};
        return verdict;
    }

    auto n = clique_order(y);
    auto np = clique_order(yprime);
    if (n && np && *n >= 3 && *np >= 3 && *np <= 2 * *n - 2) {
        verdict.verdict = Verdict::advantage;
        verdict.justification = {"clique-pair",
                                 "for cliques with 3 <= n <= n' <= 2n-2 the pair "
                                 "polymorphisms collapse to dictators "
                                 "(Brakensiek-Guruswami), forcing a gap in "
                                 "dimension 3 and higher"};
        return verdict;
    }

    verdict.verdict = Verdict::unknown;
    EvidenceBundle evidence;
    evidence.arity_bound = config.evidence_arity;
    try {
        DictatorSearchResult search =
            bounded_dictator_search(y, yprime, config.evidence_arity, config.caps);
        evidence.satisfiable = search.satisfiable;
        evidence.enumeration_sizes = search.enumeration_sizes;
    } catch (const Error&) {
        evidence.enumeration_capped = true;
        DictatorSearchResult search =
            bounded_dictator_search(y, yprime, 1, config.caps);
        evidence.arity_bound = 1;
        evidence.satisfiable = search.satisfiable;
        evidence.enumeration_sizes = search.enumeration_sizes;
    }
    verdict.evidence = evidence;
    return verdict;
}

} // namespace minionlab
