#pragma once

#include <stdexcept>
#include <string>

namespace gkzlab {

// Error taxonomy. The category drives the CLI exit code:
//   schema -> 2, precondition -> 3, numerical -> 4, indeterminate -> 5.
enum class ErrorCategory { schema, precondition, numerical, indeterminate };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    ErrorCategory category() const { return cat_; }

private:
    ErrorCategory cat_;
};

#define GKZLAB_DEFINE_ERROR(Name, Cat)                                            \
    class Name : public Error {                                                   \
    public:                                                                       \
        explicit Name(const std::string& what) : Error(ErrorCategory::Cat, what) {} \
    }

GKZLAB_DEFINE_ERROR(SchemaError, schema);

GKZLAB_DEFINE_ERROR(NotSurjective, precondition);
GKZLAB_DEFINE_ERROR(DegenerateZonotope, precondition);
GKZLAB_DEFINE_ERROR(NonGenericNu, precondition);
GKZLAB_DEFINE_ERROR(ZeroCoordinate, precondition);
GKZLAB_DEFINE_ERROR(DimensionMismatch, precondition);
GKZLAB_DEFINE_ERROR(DegenerateCone, precondition);
GKZLAB_DEFINE_ERROR(GammaNormalizationUndefined, precondition);
GKZLAB_DEFINE_ERROR(NotFuchsian, precondition);
GKZLAB_DEFINE_ERROR(RankUnsupported, precondition);
GKZLAB_DEFINE_ERROR(NoCommonFace, precondition);
GKZLAB_DEFINE_ERROR(ShapeMismatch, precondition);

GKZLAB_DEFINE_ERROR(ClearanceTooSmall, numerical);
GKZLAB_DEFINE_ERROR(StepUnderflow, numerical);
GKZLAB_DEFINE_ERROR(IllDefinedPhi, numerical);

GKZLAB_DEFINE_ERROR(IncompleteDecision, indeterminate);

#undef GKZLAB_DEFINE_ERROR

}  // namespace gkzlab
