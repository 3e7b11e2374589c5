#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aplr/types.hpp"

namespace aplr {

/// Raw survey responses as text cells, one record per respondent.
struct RawSurveyTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> rows;
};

enum class EncodingRule { likert5, yes_no, one_of_n, already_numeric };

struct ColumnEncoding {
    EncodingRule rule = EncodingRule::likert5;
    std::vector<std::string> categories;  // one_of_n only; order fixes the indicator columns
};

/// Ordered column -> rule mapping. Schema order determines the column order
/// of the encoded matrix; one_of_n expands to one indicator per category,
/// named `<column>_<category>`. Raw columns without a rule (e.g. the target
/// components) are not encoded.
struct EncodingSchema {
    std::vector<std::pair<std::string, ColumnEncoding>> columns;

    const ColumnEncoding* find(const std::string& name) const;
    void validate() const;  // throws config_error on duplicates / empty one_of_n
};

enum class Polarity { positive, negative };

struct TargetSpec {
    std::vector<std::pair<std::string, Polarity>> components;
    int threshold = 4;

    /// The seven-component learning-satisfaction target.
    static TargetSpec default_satisfaction();
    void validate() const;
};

/// Reads a CSV survey file. Trailing whitespace in cells is trimmed.
/// Errors: unreadable file, ragged row, schema column absent from the header.
RawSurveyTable load_survey(const std::filesystem::path& path, const EncodingSchema& schema);

/// Likert5 maps Strongly disagree..Strongly agree to -2..2, yes_no maps
/// Yes/No to 1/0, one_of_n expands to 0/1 indicators. An unrecognized
/// response reports row, column and value.
EncodedMatrix encode_predictors(const RawSurveyTable& raw, const EncodingSchema& schema);

/// Per row: positive components map {SD,D} -> -1, N -> 0, {A,SA} -> +1,
/// negative components the opposite way; label = 1 iff the sum of encoded
/// component values >= threshold.
Labels build_target(const RawSurveyTable& raw, const TargetSpec& spec);

struct SplitResult {
    EncodedMatrix train_x;
    Labels train_y;
    EncodedMatrix test_x;
    Labels test_y;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
};

/// Seeded stratified split. |train| = floor(n * (1 - test_fraction)); per-class
/// counts deviate from exact proportionality by at most one sample. Output
/// index lists are sorted, so identical seeds give byte-identical splits.
SplitResult stratified_split(const EncodedMatrix& x, const Labels& y, double test_fraction,
                             std::uint64_t seed);

/// Fold id per row for stratified k-fold CV (classification). Each class is
/// shuffled by the seed and dealt round-robin, so fold class frequencies
/// match the global ones to within one sample.
std::vector<int> stratified_fold_assignment(const Labels& y, int k, std::uint64_t seed);

/// Unstratified variant used for regression targets.
std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed);

/// Numeric CSV with an optional label column, as written between pipeline
/// stages. Labels are binary when every value is 0 or 1.
struct EncodedFrame {
    EncodedMatrix x;
    std::optional<Labels> y;
};

EncodedFrame read_encoded_csv(const std::filesystem::path& path, const std::string& label_column);

void write_encoded_csv(const std::filesystem::path& path, const EncodedMatrix& x,
                       const Labels* y, const std::string& label_column);

}  // namespace aplr
