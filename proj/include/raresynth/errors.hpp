#pragma once

#include <stdexcept>
#include <string>

namespace raresynth {

// Machine-checkable failure categories. Every throw site in the library uses
// Error with one of these codes so callers (and tests) can discriminate
// without parsing messages.
enum class Errc {
    missing_column,
    parse_failure,
    empty_file,
    empty_table,
    missing_imputation_source,
    negative_air_time,
    unknown_airport,
    schema_mismatch,
    singular_matrix,
    non_finite_loss,
    no_positives,
    degenerate_fold,
    augmentation_too_large,
    empty_space,
    objective_failure,
    version_mismatch,
    corrupt_file,
    invalid_config,
    io_failure,
    invalid_argument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::missing_column: return "missing_column";
        case Errc::parse_failure: return "parse_failure";
        case Errc::empty_file: return "empty_file";
        case Errc::empty_table: return "empty_table";
        case Errc::missing_imputation_source: return "missing_imputation_source";
        case Errc::negative_air_time: return "negative_air_time";
        case Errc::unknown_airport: return "unknown_airport";
        case Errc::schema_mismatch: return "schema_mismatch";
        case Errc::singular_matrix: return "singular_matrix";
        case Errc::non_finite_loss: return "non_finite_loss";
        case Errc::no_positives: return "no_positives";
        case Errc::degenerate_fold: return "degenerate_fold";
        case Errc::augmentation_too_large: return "augmentation_too_large";
        case Errc::empty_space: return "empty_space";
        case Errc::objective_failure: return "objective_failure";
        case Errc::version_mismatch: return "version_mismatch";
        case Errc::corrupt_file: return "corrupt_file";
        case Errc::invalid_config: return "invalid_config";
        case Errc::io_failure: return "io_failure";
        case Errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace raresynth
