#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrforge/lexicon.hpp"
#include "mrforge/rng.hpp"

namespace mrforge::perturb {

enum class Level { character, word, sentence, graphical };
enum class ContextType { preserving, altering };

std::string_view to_string(Level level);
std::string_view to_string(ContextType type);

/// One entry of the perturbation catalog. Ids are stable across releases;
/// context_type is fixed per descriptor and selects the satisfaction rule
/// downstream.
struct PerturbationDescriptor {
    std::string id;
    Level level;
    ContextType context_type;
    std::string display_name;
    int max_intensity = 8;
};

/// The built-in catalog: character, word, sentence and graphical levels,
/// both context types.
const std::vector<PerturbationDescriptor>& catalog();

/// Looks up a descriptor; throws UnknownPerturbationError.
const PerturbationDescriptor& descriptor(std::string_view id);

bool has_descriptor(std::string_view id);

nlohmann::ordered_json catalog_json();

/// Applies the perturbation `intensity` times, each unit edit driven by an
/// independent fork of `rng` (fork tag = unit index), feeding each result to
/// the next. Deterministic in (id, text, intensity, rng.seed()).
///
/// Throws UnknownPerturbationError, EmptyInputError, IntensityOutOfRangeError,
/// and EmptyResultError when a deletion-style edit has nothing left to remove.
std::string apply(std::string_view id, std::string_view input, int intensity,
                  const SeededRng& rng, const Lexicon& lexicon = Lexicon::embedded());

}  // namespace mrforge::perturb
