#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrforge/lexicon.hpp"
#include "mrforge/perturb.hpp"
#include "mrforge/rng.hpp"

namespace mrforge::mrspace {

/// One perturbation function with its repetition count; the atom of the
/// search space. mr_index is the stable position in the configured Set_MR
/// (-1 when unknown, e.g. after deserialization).
struct SingleMR {
    std::string perturbation_id;
    int intensity = 1;
    int mr_index = -1;

    friend bool operator==(const SingleMR& a, const SingleMR& b) {
        return a.perturbation_id == b.perturbation_id && a.intensity == b.intensity;
    }
};

/// Ordered AND-composition of SingleMRs. Composition order is semantic:
/// perturbations run left to right.
struct CmbMR {
    std::vector<SingleMR> parts;

    friend bool operator==(const CmbMR& a, const CmbMR& b) { return a.parts == b.parts; }
};

/// Canonical id of a CmbMR, e.g. "delete_character:2+swap_character:1".
/// Preserves part order; used as the cache-key component.
std::string cmb_id(const CmbMR& cmb);

/// The chromosome of the search: a set of CmbMRs. `id` is the hash of the
/// canonical form, so it is invariant under member reordering.
struct MRGroup {
    std::vector<CmbMR> members;
    std::string id;

    static MRGroup make(std::vector<CmbMR> members);
};

/// Size limits for groups and compositions plus the AND/OR split used by
/// comb_gen.
struct GroupBounds {
    int group_min = 3;
    int group_max = 30;
    int max_combo_depth = 4;
    double and_probability = 0.5;
};

/// Expands a catalog into the configured Set_MR: one SingleMR per
/// (descriptor, intensity), intensities clipped to each descriptor's bound.
std::vector<SingleMR> build_set_mr(const std::vector<perturb::PerturbationDescriptor>& catalog,
                                   const std::vector<int>& intensities);

/// Binary permutation-based initial generation: draw a uniform bit per
/// Set_MR entry, shuffle the selected subset, join adjacent pairs with
/// AND/OR drawn at and_probability, then repair to the size bounds.
/// Throws InsufficientCatalogError when |set_mr| < group_min.
MRGroup comb_gen(const std::vector<SingleMR>& set_mr, const GroupBounds& bounds, SeededRng& rng);

/// Applies each part in order, feeding outputs forward. Part i runs with
/// rng.fork(i), so stages replay independently. A part raising
/// EmptyResultError aborts with CompositionFailedError.
std::string compose(const CmbMR& cmb, std::string_view input, const SeededRng& rng,
                    const perturb::Lexicon& lexicon = perturb::Lexicon::embedded());

/// Members sorted by (parts-length, part ids, intensities); part order
/// inside members untouched; id recomputed. Idempotent.
MRGroup canonicalize(const MRGroup& group);

bool satisfies_bounds(const MRGroup& group, const GroupBounds& bounds);

nlohmann::ordered_json to_json(const MRGroup& group);
MRGroup group_from_json(const nlohmann::json& j);

namespace detail {

/// Deterministic assembly used by comb_gen once all random choices are
/// made: `selected` lists Set_MR entries in shuffled order and and_bond[i]
/// tells whether entry i+1 is AND-merged into the current CmbMR. Depth
/// overflow degrades the bond to OR. No size repair.
std::vector<CmbMR> assemble(const std::vector<SingleMR>& selected,
                            const std::vector<bool>& and_bond, int max_combo_depth);

/// Repairs member count into [group_min, group_max]: pads with uniform
/// without-replacement singletons from set_mr, or keeps a uniform subset.
std::vector<CmbMR> repair_size(std::vector<CmbMR> members, const std::vector<SingleMR>& set_mr,
                               const GroupBounds& bounds, SeededRng& rng);

}  // namespace detail

}  // namespace mrforge::mrspace
