#pragma once

#include <stdexcept>
#include <string>

namespace mrforge {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MRFORGE_DEFINE_ERROR(NAME)                                            \
    class NAME : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
    }

// perturb
MRFORGE_DEFINE_ERROR(UnknownPerturbationError);
MRFORGE_DEFINE_ERROR(EmptyInputError);
MRFORGE_DEFINE_ERROR(IntensityOutOfRangeError);
MRFORGE_DEFINE_ERROR(EmptyResultError);

// mrspace
MRFORGE_DEFINE_ERROR(CompositionFailedError);
MRFORGE_DEFINE_ERROR(InsufficientCatalogError);

// executor
MRFORGE_DEFINE_ERROR(ExecutorUnavailableError);
MRFORGE_DEFINE_ERROR(MalformedResponseError);
MRFORGE_DEFINE_ERROR(CacheCorruptionError);

// fitness / search
MRFORGE_DEFINE_ERROR(EmptyEvaluationError);
MRFORGE_DEFINE_ERROR(EmptyPopulationError);

// analysis
MRFORGE_DEFINE_ERROR(PointBeyondReferenceError);
MRFORGE_DEFINE_ERROR(DegenerateSamplesError);

// cli / orchestration
MRFORGE_DEFINE_ERROR(ConfigError);
MRFORGE_DEFINE_ERROR(CorpusError);
MRFORGE_DEFINE_ERROR(IncompatibleRunsError);

#undef MRFORGE_DEFINE_ERROR

}  // namespace mrforge
