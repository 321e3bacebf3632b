#pragma once

#include "minionlab/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace minionlab {

using Tuple = std::vector<int>;

/// Ordered list of relation symbols with arities. Names unique, arity >= 1.
class Signature {
public:
    explicit Signature(std::vector<std::pair<std::string, int>> symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    const std::string& name(int r) const { return symbols_[r].first; }
    int arity(int r) const { return symbols_[r].second; }
    std::optional<int> index_of(const std::string& name) const;

    bool operator==(const Signature& o) const { return symbols_ == o.symbols_; }

private:
    std::vector<std::pair<std::string, int>> symbols_;
};

/// Finite relational structure. Vertices are dense indices 0..n-1; relation
/// tuples are stored sorted and deduplicated, so equality is structural.
class Structure {
public:
    Structure(Signature sig, int domain_size,
              std::vector<std::vector<Tuple>> relations);

    const Signature& signature() const { return sig_; }
    int domain_size() const { return n_; }
    const std::vector<Tuple>& relation(int r) const { return relations_[r]; }
    bool similar_to(const Structure& o) const { return sig_ == o.sig_; }

    /// Number of (symbol, tuple, position) slots mentioning vertex v.
    int degree(int v) const;

    bool operator==(const Structure& o) const {
        return sig_ == o.sig_ && n_ == o.n_ && relations_ == o.relations_;
    }

private:
    Signature sig_;
    int n_;
    std::vector<std::vector<Tuple>> relations_;
};

struct Homomorphism {
    Structure source;
    Structure target;
    std::vector<int> map;
};

/// Entrywise relation preservation, the defining property.
bool is_valid_homomorphism(const Homomorphism& h);

enum class HomStatus { found, none_proven, budget_exceeded };

struct HomSearchResult {
    HomStatus status;
    std::optional<Homomorphism> hom;
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultHomBudget = 5'000'000;

/// Backtracking search for a homomorphism X -> Y, branching on vertices in
/// degree-descending order with generalized arc consistency propagation.
/// `pins` force individual vertex images before the search starts.
HomSearchResult find_homomorphism(const Structure& x, const Structure& y,
                                  std::uint64_t budget = kDefaultHomBudget,
                                  const std::vector<std::pair<int, int>>& pins = {});

struct PowerCaps {
    std::size_t max_domain = 100'000;
};

/// Direct power Y^l: domain Y^l, and a tuple is related when it arises as
/// the columns of a matrix whose rows are related tuples of Y.
Structure direct_power(const Structure& y, int ell, const PowerCaps& caps = {});

/// Mixed-radix index helpers for the power domain: a power vertex encodes
/// the tuple (v_1, ..., v_l) over the base domain, r_1 fastest.
std::vector<int> power_vertex_to_tuple(long long v, int base, int ell);
long long power_tuple_to_vertex(const std::vector<int>& t, int base);

struct PolymorphismSet {
    Structure base;
    Structure target;
    int arity;
    /// Function tables indexed by power vertex, sorted lexicographically.
    std::vector<std::vector<int>> functions;
};

struct PolymorphismCaps {
    PowerCaps power;
    std::uint64_t max_search_nodes = 10'000'000;
};

/// All homomorphisms Y^l -> Y', in a deterministic (lexicographic) order.
PolymorphismSet enumerate_polymorphisms(const Structure& y, const Structure& yprime,
                                        int ell, const PolymorphismCaps& caps = {});

/// Minor of a function table: f_pi(s) = f(s o pi), the function-minion
/// operation. Tables are over the power domain of `base_size` values.
std::vector<int> function_minor(const std::vector<int>& table, int base_size,
                                int arity, const std::vector<int>& pi_image,
                                int target_arity);

/// Named example structures: clique(n), cycle(n), path(n vertices),
/// one_in_three, nae.
Structure zoo(const std::string& name, int param = 0);

/// Parse "zoo:K5", "zoo:C7", "zoo:P4", "zoo:Z", "zoo:NAE" and the long
/// forms "zoo:clique:5" etc.
Structure parse_zoo_ref(const std::string& ref);

struct BipartiteReport {
    bool bipartite;
    std::vector<int> coloring;  // 2-colouring when bipartite
    std::vector<int> odd_walk;  // closed walk of odd length otherwise
};

/// Requires a graph: single binary symmetric irreflexive relation. Directed
/// or reflexive inputs are rejected, not coerced.
BipartiteReport is_bipartite(const Structure& g);

bool is_graph(const Structure& g);

} // namespace minionlab
