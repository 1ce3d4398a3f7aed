#pragma once

#include <stdexcept>
#include <string>

namespace scatter {

// Error categories mapped to CLI exit codes: validation -> 2,
// conditioning refusals -> 3, spectral singularities -> 4.
enum class ErrorCode {
    validation,
    conditioning,
    spectral_singularity,
    divergent_green,
    runaway_coupling,
    non_contractive,
};

class EngineError : public std::runtime_error {
  public:
    EngineError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::validation: return "validation";
        case ErrorCode::conditioning: return "conditioning";
        case ErrorCode::spectral_singularity: return "spectral_singularity";
        case ErrorCode::divergent_green: return "divergent_green";
        case ErrorCode::runaway_coupling: return "runaway_coupling";
        case ErrorCode::non_contractive: return "non_contractive";
    }
    return "unknown";
}

}  // namespace scatter
