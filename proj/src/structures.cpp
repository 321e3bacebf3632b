#include "minionlab/structures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace minionlab {

Signature::Signature(std::vector<std::pair<std::string, int>> symbols)
    : symbols_(std::move(symbols)) {
    if (symbols_.empty())
        throw Error("signature: symbol list must be non-empty");
    std::set<std::string> seen;
    for (const auto& [name, arity] : symbols_) {
        if (arity < 1)
            throw Error("signature: arity must be positive for symbol " + name);
        if (!seen.insert(name).second)
            throw Error("signature: duplicate symbol " + name);
    }
}

std::optional<int> Signature::index_of(const std::string& name) const {
    for (int r = 0; r < size(); ++r)
        if (symbols_[r].first == name)
            return r;
    return std::nullopt;
}

Structure::Structure(Signature sig, int domain_size,
                     std::vector<std::vector<Tuple>> relations)
    : sig_(std::move(sig)), n_(domain_size), relations_(std::move(relations)) {
    if (n_ < 1)
        throw Error("structure: domain size must be positive");
    if (static_cast<int>(relations_.size()) != sig_.size())
        throw Error("structure: one tuple set per symbol required");
    for (int r = 0; r < sig_.size(); ++r) {
        for (const Tuple& t : relations_[r]) {
            if (static_cast<int>(t.size()) != sig_.arity(r))
                throw Error("structure: tuple length differs from arity of " +
                            sig_.name(r));
            for (int v : t)
                if (v < 0 || v >= n_)
                    throw Error("structure: tuple entry out of domain in " +
                                sig_.name(r));
        }
        std::sort(relations_[r].begin(), relations_[r].end());
        relations_[r].erase(std::unique(relations_[r].begin(), relations_[r].end()),
                            relations_[r].end());
    }
}

int Structure::degree(int v) const {
    int d = 0;
    for (int r = 0; r < sig_.size(); ++r)
        for (const Tuple& t : relations_[r])
            for (int u : t)
                if (u == v)
                    ++d;
    return d;
}

bool is_valid_homomorphism(const Homomorphism& h) {
    if (!h.source.similar_to(h.target))
        return false;
    if (static_cast<int>(h.map.size()) != h.source.domain_size())
        return false;
    for (int v : h.map)
        if (v < 0 || v >= h.target.domain_size())
            return false;
    for (int r = 0; r < h.source.signature().size(); ++r) {
        const auto& target_rel = h.target.relation(r);
        for (const Tuple& t : h.source.relation(r)) {
            Tuple image(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                image[i] = h.map[t[i]];
            if (!std::binary_search(target_rel.begin(), target_rel.end(), image))
                return false;
        }
    }
    return true;
}

namespace {

// Candidate sets over the target domain, one word-packed bitset per source
// vertex. Target domains at desk scale stay small.
struct BitSet {
    std::vector<std::uint64_t> words;

    explicit BitSet(int n, bool full) : words((n + 63) / 64, 0) {
        if (full) {
            for (auto& w : words)
                w = ~0ull;
            int rem = n % 64;
            if (rem)
                words.back() = (1ull << rem) - 1;
        }
    }
    bool test(int i) const { return (words[i / 64] >> (i % 64)) & 1; }
    void set(int i) { words[i / 64] |= 1ull << (i % 64); }
    void reset(int i) { words[i / 64] &= ~(1ull << (i % 64)); }
    bool empty() const {
        for (auto w : words)
            if (w)
                return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (auto w : words)
            c += __builtin_popcountll(w);
        return c;
    }
    void intersect(const BitSet& o) {
        for (std::size_t k = 0; k < words.size(); ++k)
            words[k] &= o.words[k];
    }
    bool operator==(const BitSet& o) const { return words == o.words; }
};

struct ConstraintRef {
    int rel;
    int tuple;
};

class HomSearcher {
public:
    HomSearcher(const Structure& x, const Structure& y, std::uint64_t budget)
        : x_(x), y_(y), budget_(budget) {
        const int n = x_.domain_size();
        occurs_.resize(n);
        for (int r = 0; r < x_.signature().size(); ++r)
            for (int t = 0; t < static_cast<int>(x_.relation(r).size()); ++t)
                for (int v : x_.relation(r)[t])
                    occurs_[v].push_back({r, t});
        for (auto& lst : occurs_) {
            std::sort(lst.begin(), lst.end(), [](auto a, auto b) {
                return std::tie(a.rel, a.tuple) < std::tie(b.rel, b.tuple);
            });
            lst.erase(std::unique(lst.begin(), lst.end(),
                                  [](auto a, auto b) {
                                      return a.rel == b.rel && a.tuple == b.tuple;
                                  }),
                      lst.end());
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return x_.degree(a) > x_.degree(b);
        });
    }

    // Enumerates homomorphisms; on_solution returns false to stop early.
    template <typename Fn>
    HomStatus run(std::vector<BitSet> cand, Fn&& on_solution) {
        nodes_ = 0;
        exhausted_ = true;
        if (!propagate(cand))
            return HomStatus::none_proven;
        bool keep_going = true;
        dfs(std::move(cand), 0, on_solution, keep_going);
        if (!keep_going)
            return HomStatus::found;
        return exhausted_ ? HomStatus::none_proven : HomStatus::budget_exceeded;
    }

    std::vector<BitSet> full_candidates() const {
        return std::vector<BitSet>(x_.domain_size(), BitSet(y_.domain_size(), true));
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool revise(const ConstraintRef& c, std::vector<BitSet>& cand) {
        const Tuple& xt = x_.relation(c.rel)[c.tuple];
        const auto& ytuples = y_.relation(c.rel);
        const int ar = static_cast<int>(xt.size());
        std::vector<BitSet> supported(ar, BitSet(y_.domain_size(), false));
        for (const Tuple& yt : ytuples) {
            bool ok = true;
            for (int i = 0; i < ar && ok; ++i)
                ok = cand[xt[i]].test(yt[i]);
            if (ok)
                for (int i = 0; i < ar; ++i)
                    supported[i].set(yt[i]);
        }
        for (int i = 0; i < ar; ++i) {
            BitSet before = cand[xt[i]];
            cand[xt[i]].intersect(supported[i]);
            if (!(cand[xt[i]] == before))
                changed_.push_back(xt[i]);
            if (cand[xt[i]].empty())
                return false;
        }
        return true;
    }

    bool propagate(std::vector<BitSet>& cand) {
        std::vector<ConstraintRef> queue;
        std::set<std::pair<int, int>> queued;
        auto push_all_of = [&](int v) {
            for (const auto& c : occurs_[v])
                if (queued.insert({c.rel, c.tuple}).second)
                    queue.push_back(c);
        };
        for (int v = 0; v < x_.domain_size(); ++v)
            push_all_of(v);
        while (!queue.empty()) {
            ConstraintRef c = queue.back();
            queue.pop_back();
            queued.erase({c.rel, c.tuple});
            changed_.clear();
            if (!revise(c, cand))
                return false;
            for (int v : changed_)
                push_all_of(v);
        }
        return true;
    }

    template <typename Fn>
    void dfs(std::vector<BitSet> cand, int depth, Fn&& on_solution,
             bool& keep_going) {
        if (!keep_going)
            return;
        if (++nodes_ > budget_) {
            exhausted_ = false;
            return;
        }
        // pick the next unassigned vertex in the static order
        int v = -1;
        for (int k = depth; k < x_.domain_size(); ++k) {
            if (cand[order_[k]].count() > 1) {
                std::swap(order_[depth], order_[k]);
                v = order_[depth];
                break;
            }
        }
        if (v < 0) {
            std::vector<int> map(x_.domain_size());
            for (int u = 0; u < x_.domain_size(); ++u)
                for (int w = 0; w < y_.domain_size(); ++w)
                    if (cand[u].test(w)) {
                        map[u] = w;
                        break;
                    }
            if (!on_solution(map))
                keep_going = false;
            return;
        }
        for (int w = 0; w < y_.domain_size() && keep_going; ++w) {
            if (!cand[v].test(w))
                continue;
            std::vector<BitSet> child = cand;
            child[v] = BitSet(y_.domain_size(), false);
            child[v].set(w);
            changed_.clear();
            bool ok = true;
            {
                std::vector<ConstraintRef> queue = occurs_[v];
                std::set<std::pair<int, int>> queued;
                for (const auto& c : queue)
                    queued.insert({c.rel, c.tuple});
                while (!queue.empty() && ok) {
                    ConstraintRef c = queue.back();
                    queue.pop_back();
                    queued.erase({c.rel, c.tuple});
                    changed_.clear();
                    ok = revise(c, child);
                    if (ok)
                        for (int u : changed_)
                            for (const auto& c2 : occurs_[u])
                                if (queued.insert({c2.rel, c2.tuple}).second)
                                    queue.push_back(c2);
                }
            }
            if (ok)
                dfs(std::move(child), depth + 1, on_solution, keep_going);
        }
    }

    const Structure& x_;
    const Structure& y_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = true;
    std::vector<std::vector<ConstraintRef>> occurs_;
    std::vector<int> order_;
    std::vector<int> changed_;
};

} // namespace

HomSearchResult find_homomorphism(const Structure& x, const Structure& y,
                                  std::uint64_t budget,
                                  const std::vector<std::pair<int, int>>& pins) {
    if (!x.similar_to(y))
        throw Error("find_homomorphism: structures are not similar");
    HomSearcher searcher(x, y, budget);
    auto cand = searcher.full_candidates();
    for (auto [v, w] : pins) {
        if (v < 0 || v >= x.domain_size() || w < 0 || w >= y.domain_size())
            throw Error("find_homomorphism: pin out of range");
        for (int u = 0; u < y.domain_size(); ++u)
            if (u != w)
                cand[v].reset(u);
        if (cand[v].empty())
            return {HomStatus::none_proven, std::nullopt, 0};
    }
    std::optional<std::vector<int>> found;
    HomStatus status = searcher.run(std::move(cand), [&](const std::vector<int>& m) {
        found = m;
        return false;  // stop at the first solution
    });
    HomSearchResult res{status, std::nullopt, searcher.nodes()};
    if (found) {
        res.status = HomStatus::found;
        res.hom = Homomorphism{x, y, *found};
    }
    return res;
}

std::vector<int> power_vertex_to_tuple(long long v, int base, int ell) {
    std::vector<int> t(ell);
    for (int i = 0; i < ell; ++i) {
        t[i] = static_cast<int>(v % base);
        v /= base;
    }
    return t;
}

long long power_tuple_to_vertex(const std::vector<int>& t, int base) {
    long long v = 0;
    for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i)
        v = v * base + t[i];
    return v;
}

Structure direct_power(const Structure& y, int ell, const PowerCaps& caps) {
    if (ell < 1)
        throw Error("direct_power: exponent must be positive");
    const int base = y.domain_size();
    double size = std::pow(static_cast<double>(base), ell);
    if (size > static_cast<double>(caps.max_domain))
        throw Error("direct_power: domain size cap exceeded");
    const auto n = static_cast<long long>(size + 0.5);

    std::vector<std::vector<Tuple>> relations(y.signature().size());
    for (int r = 0; r < y.signature().size(); ++r) {
        const auto& rel = y.relation(r);
        const int ar = y.signature().arity(r);
        if (rel.empty())
            continue;
        // every choice of l rows from rel gives a tuple of column vertices
        std::vector<std::size_t> rows(ell, 0);
        while (true) {
            Tuple t(ar);
            for (int j = 0; j < ar; ++j) {
                std::vector<int> column(ell);
                for (int i = 0; i < ell; ++i)
                    column[i] = rel[rows[i]][j];
                t[j] = static_cast<int>(power_tuple_to_vertex(column, base));
            }
            relations[r].push_back(std::move(t));
            int pos = ell - 1;
            while (pos >= 0 && ++rows[pos] == rel.size()) {
                rows[pos] = 0;
                --pos;
            }
            if (pos < 0)
                break;
        }
    }
    return Structure(y.signature(), static_cast<int>(n), std::move(relations));
}

PolymorphismSet enumerate_polymorphisms(const Structure& y, const Structure& yprime,
                                        int ell, const PolymorphismCaps& caps) {
    if (!y.similar_to(yprime))
        throw Error("enumerate_polymorphisms: structures are not similar");
    Structure power = direct_power(y, ell, caps.power);
    HomSearcher searcher(power, yprime, caps.max_search_nodes);
    std::vector<std::vector<int>> functions;
    HomStatus status = searcher.run(searcher.full_candidates(),
                                    [&](const std::vector<int>& table) {
                                        functions.push_back(table);
                                        return true;  // keep enumerating
                                    });
    if (status == HomStatus::budget_exceeded)
        throw Error("enumerate_polymorphisms: search node cap exceeded");
    std::sort(functions.begin(), functions.end());
    return PolymorphismSet{y, yprime, ell, std::move(functions)};
}

std::vector<int> function_minor(const std::vector<int>& table, int base_size,
                                int arity, const std::vector<int>& pi_image,
                                int target_arity) {
    if (static_cast<int>(pi_image.size()) != arity)
        throw Error("function_minor: map does not match arity");
    double size = std::pow(static_cast<double>(base_size), target_arity);
    auto n = static_cast<long long>(size + 0.5);
    std::vector<int> out(n);
    for (long long v = 0; v < n; ++v) {
        std::vector<int> s = power_vertex_to_tuple(v, base_size, target_arity);
        std::vector<int> composed(arity);
        for (int i = 0; i < arity; ++i)
            composed[i] = s[pi_image[i]];
        out[v] = table[power_tuple_to_vertex(composed, base_size)];
    }
    return out;
}

namespace {

Structure make_graph(int n, std::vector<std::pair<int, int>> edges) {
    std::vector<Tuple> rel;
    for (auto [a, b] : edges) {
        rel.push_back({a, b});
        rel.push_back({b, a});
    }
    return Structure(Signature({{"E", 2}}), n, {std::move(rel)});
}

} // namespace

Structure zoo(const std::string& name, int param) {
    if (name == "clique") {
        if (param < 1)
            throw Error("zoo: clique needs n >= 1");
        std::vector<std::pair<int, int>> edges;
        for (int a = 0; a < param; ++a)
            for (int b = a + 1; b < param; ++b)
                edges.push_back({a, b});
        return make_graph(param, std::move(edges));
    }
    if (name == "cycle") {
        if (param < 3)
            throw Error("zoo: cycle needs n >= 3");
        std::vector<std::pair<int, int>> edges;
        for (int a = 0; a < param; ++a)
            edges.push_back({a, (a + 1) % param});
        return make_graph(param, std::move(edges));
    }
    if (name == "path") {
        if (param < 1)
            throw Error("zoo: path needs n >= 1 vertices");
        std::vector<std::pair<int, int>> edges;
        for (int a = 0; a + 1 < param; ++a)
            edges.push_back({a, a + 1});
        return make_graph(param, std::move(edges));
    }
    if (name == "one_in_three") {
        return Structure(Signature({{"R", 3}}), 2,
                         {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    }
    if (name == "nae") {
        return Structure(Signature({{"R", 3}}), 2,
                         {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                           {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}});
    }
    throw Error("zoo: unknown structure name '" + name + "'");
}

Structure parse_zoo_ref(const std::string& ref) {
    std::string body = ref;
    if (body.rfind("zoo:", 0) == 0)
        body = body.substr(4);
    if (body == "Z")
        return zoo("one_in_three");
    if (body == "NAE" || body == "Z'")
        return zoo("nae");
    if (body.size() >= 2 && (body[0] == 'K' || body[0] == 'C' || body[0] == 'P')) {
        bool numeric = true;
        for (std::size_t i = 1; i < body.size(); ++i)
            numeric = numeric && std::isdigit(static_cast<unsigned char>(body[i]));
        if (numeric) {
            int n = std::stoi(body.substr(1));
            if (body[0] == 'K')
                return zoo("clique", n);
            if (body[0] == 'C')
                return zoo("cycle", n);
            return zoo("path", n);
        }
    }
    auto colon = body.find(':');
    if (colon != std::string::npos)
        return zoo(body.substr(0, colon), std::stoi(body.substr(colon + 1)));
    return zoo(body);
}

bool is_graph(const Structure& g) {
    if (g.signature().size() != 1 || g.signature().arity(0) != 2)
        return false;
    const auto& rel = g.relation(0);
    for (const Tuple& t : rel) {
        if (t[0] == t[1])
            return false;  // reflexive
        if (!std::binary_search(rel.begin(), rel.end(), Tuple{t[1], t[0]}))
            return false;  // directed
    }
    return true;
}

BipartiteReport is_bipartite(const Structure& g) {
    if (!is_graph(g))
        throw Error("is_bipartite: input is not a graph");
    const int n = g.domain_size();
    std::vector<std::vector<int>> adj(n);
    for (const Tuple& t : g.relation(0))
        adj[t[0]].push_back(t[1]);

    std::vector<int> color(n, -1), parent(n, -1);
    for (int root = 0; root < n; ++root) {
        if (color[root] != -1)
            continue;
        color[root] = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u]) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    stack.push_back(v);
                } else if (color[v] == color[u]) {
                    // walk both endpoints up to a common ancestor
                    std::vector<int> pu, pv;
                    for (int a = u; a != -1; a = parent[a])
                        pu.push_back(a);
                    for (int a = v; a != -1; a = parent[a])
                        pv.push_back(a);
                    while (pu.size() > 1 && pv.size() > 1 &&
                           pu[pu.size() - 2] == pv[pv.size() - 2]) {
                        pu.pop_back();
                        pv.pop_back();
                    }
                    std::vector<int> walk(pu.begin(), pu.end());
                    for (auto it = pv.rbegin() + 1; it != pv.rend(); ++it)
                        walk.push_back(*it);
                    walk.push_back(u);
                    return BipartiteReport{false, {}, std::move(walk)};
                }
            }
        }
    }
    return BipartiteReport{true, std::move(color), {}};
}

} // namespace minionlab
