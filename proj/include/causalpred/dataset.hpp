#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "causalpred/common.hpp"

namespace causalpred {

enum class VarRole { dependent, predictor };
enum class VarTransform { none, natural_log };
enum class VarKind { continuous, binary };

std::string to_string(VarRole r);
std::string to_string(VarTransform t);
std::string to_string(VarKind k);

struct VariableSpec {
    std::string name;
    VarRole role = VarRole::predictor;
    VarTransform transform = VarTransform::none;
    VarKind kind = VarKind::continuous;
};

// Date window split; train is [first date, train_end], test is [test_start, test_end].
struct SplitSpec {
    Date train_end;
    Date test_start;
    Date test_end;
};

/// Dense entity-by-date-by-variable panel. Immutable after construction;
/// every cell is present and finite, dates are consecutive calendar days,
/// and exactly one variable carries the dependent role.
class PanelDataset {
public:
    PanelDataset(std::vector<std::string> entities, std::vector<Date> dates,
                 std::vector<VariableSpec> variables, std::vector<double> values,
                 bool transforms_applied = false);

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<VariableSpec>& variables() const { return variables_; }
    bool transforms_applied() const { return transforms_applied_; }

    std::size_t n_entities() const { return entities_.size(); }
    std::size_t n_dates() const { return dates_.size(); }
    std::size_t n_variables() const { return variables_.size(); }
    std::size_t n_rows() const { return entities_.size() * dates_.size(); }

    double value(std::size_t entity, std::size_t date, std::size_t var) const {
        return values_[(entity * dates_.size() + date) * variables_.size() + var];
    }
    const std::vector<double>& values() const { return values_; }

    std::size_t variable_index(const std::string& name) const;  // throws if unknown
    const VariableSpec& dependent() const;
    std::vector<std::string> predictor_names() const;

    /// Contiguous per-entity series of one variable, in date order.
    std::vector<double> series(std::size_t entity, std::size_t var) const;

private:
    std::vector<std::string> entities_;
    std::vector<Date> dates_;
    std::vector<VariableSpec> variables_;
    std::vector<double> values_;  // indexed (entity, date, variable), row-major
    bool transforms_applied_ = false;
};

/// Parses a schema file of `name = role, transform, kind` lines.
std::vector<VariableSpec> parse_schema_file(const std::string& path);
std::vector<VariableSpec> parse_schema_text(const std::string& text, const std::string& origin);

/// Reads a long-format CSV (`entity,date,<var...>`) and validates it against
/// the schema. Rows are sorted by (entity, date); entities sort lexically.
/// Blank cells, non-finite values, duplicate keys, date gaps, and header
/// mismatches are each rejected with a diagnostic naming the offending
/// row and column.
PanelDataset ingest_csv(const std::string& path, const std::vector<VariableSpec>& schema);
PanelDataset ingest_csv_text(const std::string& text, const std::vector<VariableSpec>& schema,
                             const std::string& origin);

/// Replaces each natural-log variable by its log. Errors on non-positive
/// cells and on datasets already transformed.
PanelDataset apply_transforms(const PanelDataset& data);

std::pair<PanelDataset, PanelDataset> split_by_date(const PanelDataset& data,
                                                    const SplitSpec& spec);

/// Per-variable location/scale fitted on one partition. Binary variables are
/// carried with an exempt flag (mean 0, sd 1) so they pass through untouched.
struct StandardizationParams {
    std::vector<std::string> names;
    std::vector<double> means;
    std::vector<double> sds;      // sample sd (n-1 denominator)
    std::vector<bool> exempt;

    std::size_t index_of(const std::string& name) const;  // throws if unknown
};

StandardizationParams standardize_fit(const PanelDataset& data,
                                      const std::vector<std::string>& vars);
PanelDataset standardize_apply(const StandardizationParams& params, const PanelDataset& data);
PanelDataset standardize_invert(const StandardizationParams& params, const PanelDataset& data);

/// Writes the canonical long-format CSV. Lines starting with '#' are comments;
/// ingest skips them.
void write_csv(const PanelDataset& data, std::ostream& out,
               const std::vector<std::string>& comment_lines = {});
std::string to_csv(const PanelDataset& data, const std::vector<std::string>& comment_lines = {});

/// Serializes a schema in the format parse_schema_file reads.
std::string schema_to_text(const std::vector<VariableSpec>& schema);

}  // namespace causalpred
