#pragma once

#include "minionlab/minor_map.hpp"
#include "minionlab/structures.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minionlab {

enum class Verdict { advantage, no_advantage, unknown };

/// Named fact licensing a definite verdict; definite verdicts always carry
/// one, bounded-search evidence alone never upgrades past unknown.
struct Justification {
    std::string id;
    std::string detail;
};

/// Index choices for the enumerated polymorphisms of arities <= L,
/// consistent with every minor map between those arities.
struct DictatorAssignment {
    int max_arity;
    /// choice[a - 1][f] is the 0-based selected coordinate for function f of
    /// the arity-a enumeration.
    std::vector<std::vector<int>> choice;
};

/// One instance of the consistency condition xi(f_/pi) = pi(xi(f)).
struct MinorIdentity {
    int arity;
    int function;        // index in the arity enumeration
    MinorMap pi;
    int minor_function;  // index of f_/pi in the target enumeration
};

struct DictatorSearchResult {
    bool satisfiable = false;
    std::optional<DictatorAssignment> assignment;
    /// On unsat: a minimal set of identities that is already inconsistent.
    std::vector<MinorIdentity> conflict;
    std::vector<std::size_t> enumeration_sizes;  // per arity 1..L
};

struct DictatorSearchCaps {
    PolymorphismCaps poly;
    std::size_t max_functions_per_arity = 200'000;
};

/// Searches for an index assignment on all polymorphisms of the pair up to
/// the arity bound, consistent with every minor map between those arities.
DictatorSearchResult bounded_dictator_search(const Structure& y,
                                             const Structure& yprime, int max_arity,
                                             const DictatorSearchCaps& caps = {});

/// Exhaustively re-checks an assignment against every identity.
bool verify_dictator_assignment(const Structure& y, const Structure& yprime,
                                const DictatorAssignment& assignment,
                                const DictatorSearchCaps& caps = {});

struct EvidenceBundle {
    int arity_bound = 0;
    bool satisfiable = false;
    bool enumeration_capped = false;
    std::vector<std::size_t> enumeration_sizes;
};

struct AdvantageVerdict {
    std::string subject;
    int dimension = 0;
    Verdict verdict = Verdict::unknown;
    std::optional<Justification> justification;
    std::optional<EvidenceBundle> evidence;
};

/// The graph table: no advantage over dimension <= 2; in dimension >= 3,
/// advantage exactly for non-bipartite graphs.
AdvantageVerdict classify_graph(const Structure& g, int dimension);

struct PairClassifyConfig {
    int evidence_arity = 2;
    DictatorSearchCaps caps;
    std::uint64_t hom_budget = 1'000'000;
};

/// The pair classifier: low dimension collapses; the 1-in-3 / not-all-equal
/// pair is solved by its semidefinite relaxation; clique pairs follow the
/// chromatic-gap condition n' <= 2n - 2; anything else stays unknown with
/// bounded-search evidence attached.
AdvantageVerdict classify_pair(const Structure& y, const Structure& yprime,
                               int dimension, const PairClassifyConfig& config = {});

} // namespace minionlab
