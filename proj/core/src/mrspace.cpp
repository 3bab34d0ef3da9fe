#include "mrforge/mrspace.hpp"

#include <algorithm>
#include <cstdio>

#include "mrforge/errors.hpp"

namespace mrforge::mrspace {

std::string cmb_id(const CmbMR& cmb) {
    std::string out;
    for (std::size_t i = 0; i < cmb.parts.size(); ++i) {
        if (i) out += '+';
        out += cmb.parts[i].perturbation_id;
        out += ':';
        out += std::to_string(cmb.parts[i].intensity);
    }
    return out;
}

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf, 16);
}

bool cmb_less(const CmbMR& a, const CmbMR& b) {
    if (a.parts.size() != b.parts.size()) return a.parts.size() < b.parts.size();
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
        if (a.parts[i].perturbation_id != b.parts[i].perturbation_id)
            return a.parts[i].perturbation_id < b.parts[i].perturbation_id;
    }
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
        if (a.parts[i].intensity != b.parts[i].intensity)
            return a.parts[i].intensity < b.parts[i].intensity;
    }
    return false;
}

std::string canonical_id(const std::vector<CmbMR>& members) {
    std::vector<std::string> ids;
    ids.reserve(members.size());
    for (const auto& m : members) ids.push_back(cmb_id(m));
    std::sort(ids.begin(), ids.end());
    std::string blob;
    for (const auto& s : ids) {
        blob += s;
        blob += '|';
    }
    return hex16(fnv1a64(blob));
}

}  // namespace

MRGroup MRGroup::make(std::vector<CmbMR> members) {
    MRGroup g;
    g.id = canonical_id(members);
    g.members = std::move(members);
    return g;
}

std::vector<SingleMR> build_set_mr(const std::vector<perturb::PerturbationDescriptor>& catalog,
                                   const std::vector<int>& intensities) {
    std::vector<SingleMR> out;
    int index = 0;
    for (const auto& desc : catalog) {
        for (int level : intensities) {
            if (level < 1 || level > desc.max_intensity) continue;
            out.push_back({desc.id, level, index++});
        }
    }
    return out;
}

namespace detail {

std::vector<CmbMR> assemble(const std::vector<SingleMR>& selected,
                            const std::vector<bool>& and_bond, int max_combo_depth) {
    std::vector<CmbMR> members;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        bool merge = i > 0 && i - 1 < and_bond.size() && and_bond[i - 1] &&
                     static_cast<int>(members.back().parts.size()) < max_combo_depth;
        if (merge) {
            members.back().parts.push_back(selected[i]);
        } else {
            members.push_back(CmbMR{{selected[i]}});
        }
    }
    return members;
}

std::vector<CmbMR> repair_size(std::vector<CmbMR> members, const std::vector<SingleMR>& set_mr,
                               const GroupBounds& bounds, SeededRng& rng) {
    if (static_cast<int>(members.size()) < bounds.group_min) {
        // Pad with singletons drawn uniformly without replacement.
        std::vector<std::size_t> pool(set_mr.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        rng.shuffle(pool);
        std::size_t next = 0;
        while (static_cast<int>(members.size()) < bounds.group_min && next < pool.size()) {
            members.push_back(CmbMR{{set_mr[pool[next++]]}});
        }
    }
    if (static_cast<int>(members.size()) > bounds.group_max) {
        // Keep a uniform subset, preserving relative order.
        std::vector<std::size_t> idx(members.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        rng.shuffle(idx);
        idx.resize(static_cast<std::size_t>(bounds.group_max));
        std::sort(idx.begin(), idx.end());
        std::vector<CmbMR> kept;
        kept.reserve(idx.size());
        for (std::size_t i : idx) kept.push_back(std::move(members[i]));
        members = std::move(kept);
    }
    return members;
}

}  // namespace detail

MRGroup comb_gen(const std::vector<SingleMR>& set_mr, const GroupBounds& bounds, SeededRng& rng) {
    if (static_cast<int>(set_mr.size()) < bounds.group_min)
        throw InsufficientCatalogError("comb_gen: |set_mr| = " + std::to_string(set_mr.size()) +
                                       " < group_min = " + std::to_string(bounds.group_min));
    std::vector<SingleMR> selected;
    for (const auto& mr : set_mr) {
        if (rng.bernoulli(0.5)) selected.push_back(mr);
    }
    rng.shuffle(selected);
    std::vector<bool> and_bond;
    for (std::size_t i = 1; i < selected.size(); ++i)
        and_bond.push_back(rng.bernoulli(bounds.and_probability));
    auto members = detail::assemble(selected, and_bond, bounds.max_combo_depth);
    members = detail::repair_size(std::move(members), set_mr, bounds, rng);
    return MRGroup::make(std::move(members));
}

std::string compose(const CmbMR& cmb, std::string_view input, const SeededRng& rng,
                    const perturb::Lexicon& lexicon) {
    if (input.empty()) throw EmptyInputError("compose: empty input text");
    std::string current(input);
    for (std::size_t i = 0; i < cmb.parts.size(); ++i) {
        const SingleMR& part = cmb.parts[i];
        try {
            current = perturb::apply(part.perturbation_id, current, part.intensity,
                                     rng.fork(static_cast<std::uint64_t>(i)), lexicon);
        } catch (const EmptyResultError& e) {
            throw CompositionFailedError("compose: part " + std::to_string(i) + " (" +
                                         part.perturbation_id + ") failed: " + e.what());
        } catch (const EmptyInputError& e) {
            throw CompositionFailedError("compose: part " + std::to_string(i) + " (" +
                                         part.perturbation_id + ") failed: " + e.what());
        }
    }
    return current;
}

MRGroup canonicalize(const MRGroup& group) {
    std::vector<CmbMR> members = group.members;
    std::stable_sort(members.begin(), members.end(), cmb_less);
    return MRGroup::make(std::move(members));
}

bool satisfies_bounds(const MRGroup& group, const GroupBounds& bounds) {
    if (static_cast<int>(group.members.size()) < bounds.group_min ||
        static_cast<int>(group.members.size()) > bounds.group_max)
        return false;
    for (const auto& m : group.members) {
        if (m.parts.empty() || static_cast<int>(m.parts.size()) > bounds.max_combo_depth)
            return false;
    }
    return true;
}

nlohmann::ordered_json to_json(const MRGroup& group) {
    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (const auto& m : group.members) {
        nlohmann::ordered_json parts = nlohmann::ordered_json::array();
        for (const auto& p : m.parts) {
            parts.push_back({{"perturbation_id", p.perturbation_id}, {"intensity", p.intensity}});
        }
        members.push_back({{"parts", std::move(parts)}});
    }
    return {{"id", group.id}, {"members", std::move(members)}};
}

MRGroup group_from_json(const nlohmann::json& j) {
    std::vector<CmbMR> members;
    for (const auto& m : j.at("members")) {
        CmbMR cmb;
        for (const auto& p : m.at("parts")) {
            cmb.parts.push_back(
                {p.at("perturbation_id").get<std::string>(), p.at("intensity").get<int>(), -1});
        }
        members.push_back(std::move(cmb));
    }
    return MRGroup::make(std::move(members));
}

}  // namespace mrforge::mrspace
