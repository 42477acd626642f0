#include "causalpred/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace causalpred {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_number(const std::string& field, const std::string& where) {
    const std::string t = trim(field);
    if (t.empty()) throw ValidationError("missing cell at " + where);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw ValidationError("unparseable number '" + t + "' at " + where);
    }
    if (!std::isfinite(v)) throw ValidationError("non-finite value at " + where);
    return v;
}

VarRole parse_role(const std::string& s, const std::string& where) {
    if (s == "dependent") return VarRole::dependent;
    if (s == "predictor") return VarRole::predictor;
    throw ValidationError("unknown role '" + s + "' in " + where +
                          " (expected dependent|predictor)");
}

VarTransform parse_transform(const std::string& s, const std::string& where) {
    if (s == "none") return VarTransform::none;
    if (s == "natural-log") return VarTransform::natural_log;
    throw ValidationError("unknown transform '" + s + "' in " + where +
                          " (expected none|natural-log)");
}

VarKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "continuous") return VarKind::continuous;
    if (s == "binary") return VarKind::binary;
    throw ValidationError("unknown kind '" + s + "' in " + where +
                          " (expected continuous|binary)");
}

}  // namespace

std::string to_string(VarRole r) {
    return r == VarRole::dependent ? "dependent" : "predictor";
}
std::string to_string(VarTransform t) {
    return t == VarTransform::natural_log ? "natural-log" : "none";
}
std::string to_string(VarKind k) {
    return k == VarKind::binary ? "binary" : "continuous";
}

PanelDataset::PanelDataset(std::vector<std::string> entities, std::vector<Date> dates,
                           std::vector<VariableSpec> variables, std::vector<double> values,
                           bool transforms_applied)
    : entities_(std::move(entities)),
      dates_(std::move(dates)),
      variables_(std::move(variables)),
      values_(std::move(values)),
      transforms_applied_(transforms_applied) {
    if (entities_.empty()) throw ValidationError("entity list is empty");
    if (dates_.empty()) throw ValidationError("date list is empty");
    if (variables_.empty()) throw ValidationError("variable list is empty");

    std::unordered_set<std::string> seen;
    for (const auto& e : entities_) {
        if (!seen.insert(e).second) throw ValidationError("duplicate entity id: " + e);
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        const int step = dates_[i] - dates_[i - 1];
        if (step <= 0) throw ValidationError("dates not strictly increasing at " +
                                             dates_[i].to_string());
        if (step != 1) {
            throw ValidationError("date gap between " + dates_[i - 1].to_string() + " and " +
                                  dates_[i].to_string() + " (daily spacing required)");
        }
    }
    seen.clear();
    int dependents = 0;
    for (const auto& v : variables_) {
        if (!seen.insert(v.name).second) throw ValidationError("duplicate variable: " + v.name);
        dependents += v.role == VarRole::dependent;
    }
    if (dependents != 1) {
        throw ValidationError("schema must declare exactly one dependent variable, found " +
                              std::to_string(dependents));
    }
    const std::size_t expected = entities_.size() * dates_.size() * variables_.size();
    if (values_.size() != expected) {
        throw ValidationError("value table size mismatch: " + std::to_string(values_.size()) +
                              " cells, expected " + std::to_string(expected));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            const std::size_t v = i % variables_.size();
            const std::size_t d = (i / variables_.size()) % dates_.size();
            const std::size_t e = i / (variables_.size() * dates_.size());
            throw ValidationError("non-finite value at (" + entities_[e] + ", " +
                                  dates_[d].to_string() + ", " + variables_[v].name + ")");
        }
    }
}

std::size_t PanelDataset::variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return i;
    }
    throw ValidationError("unknown variable: " + name);
}

const VariableSpec& PanelDataset::dependent() const {
    for (const auto& v : variables_) {
        if (v.role == VarRole::dependent) return v;
    }
    throw ValidationError("no dependent variable");  // unreachable after construction
}

std::vector<std::string> PanelDataset::predictor_names() const {
    std::vector<std::string> out;
    for (const auto& v : variables_) {
        if (v.role == VarRole::predictor) out.push_back(v.name);
    }
    return out;
}

std::vector<double> PanelDataset::series(std::size_t entity, std::size_t var) const {
    std::vector<double> out(dates_.size());
    for (std::size_t d = 0; d < dates_.size(); ++d) out[d] = value(entity, d, var);
    return out;
}

std::vector<VariableSpec> parse_schema_text(const std::string& text, const std::string& origin) {
    std::vector<VariableSpec> schema;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw ValidationError("malformed schema line (want `name = role,transform,kind`) at " +
                                  where);
        }
        VariableSpec spec;
        spec.name = trim(t.substr(0, eq));
        if (spec.name.empty()) throw ValidationError("empty variable name at " + where);
        auto parts = split(t.substr(eq + 1), ',');
        if (parts.size() != 3) {
            throw ValidationError("schema line needs role,transform,kind at " + where);
        }
        spec.role = parse_role(trim(parts[0]), where);
        spec.transform = parse_transform(trim(parts[1]), where);
        spec.kind = parse_kind(trim(parts[2]), where);
        if (spec.kind == VarKind::binary && spec.transform != VarTransform::none) {
            throw ValidationError("binary variable '" + spec.name +
                                  "' cannot carry a transform (" + where + ")");
        }
        schema.push_back(std::move(spec));
    }
    if (schema.empty()) throw ValidationError("schema is empty: " + origin);
    return schema;
}

std::vector<VariableSpec> parse_schema_file(const std::string& path) {
    return parse_schema_text(read_file(path), path);
}

std::string schema_to_text(const std::vector<VariableSpec>& schema) {
    std::string out;
    for (const auto& v : schema) {
        out += v.name + " = " + to_string(v.role) + ", " + to_string(v.transform) + ", " +
               to_string(v.kind) + "\n";
    }
    return out;
}

PanelDataset ingest_csv_text(const std::string& text, const std::vector<VariableSpec>& schema,
                             const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    // Header: `entity` and `date` columns, then exactly the schema names in any order.
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        header = split(line, ',');
        for (auto& h : header) h = trim(h);
        break;
    }
    if (header.empty()) throw ValidationError("no header row in " + origin);

    std::unordered_map<std::string, std::size_t> schema_index;
    for (std::size_t i = 0; i < schema.size(); ++i) schema_index[schema[i].name] = i;
    if (schema_index.size() != schema.size()) {
        throw ValidationError("schema has duplicate variable names");
    }

    int entity_col = -1, date_col = -1;
    std::vector<int> var_col(schema.size(), -1);  // schema index -> csv column
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& h = header[c];
        if (h == "entity") {
            if (entity_col >= 0) throw ValidationError("duplicate 'entity' column in " + origin);
            entity_col = static_cast<int>(c);
        } else if (h == "date") {
            if (date_col >= 0) throw ValidationError("duplicate 'date' column in " + origin);
            date_col = static_cast<int>(c);
        } else {
            auto it = schema_index.find(h);
            if (it == schema_index.end()) {
                throw ValidationError("unknown column '" + h + "' in " + origin +
                                      " (not declared in schema)");
            }
            if (var_col[it->second] >= 0) {
                throw ValidationError("duplicate column '" + h + "' in " + origin);
            }
            var_col[it->second] = static_cast<int>(c);
        }
    }
    if (entity_col < 0) throw ValidationError("missing 'entity' column in " + origin);
    if (date_col < 0) throw ValidationError("missing 'date' column in " + origin);
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (var_col[i] < 0) {
            throw ValidationError("missing column '" + schema[i].name + "' in " + origin);
        }
    }

    struct Key {
        std::string entity;
        int date;
        bool operator<(const Key& o) const {
            return entity != o.entity ? entity < o.entity : date < o.date;
        }
    };
    std::map<Key, std::vector<double>> rows;
    std::set<int> date_set;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(line, ',');
        if (fields.size() != header.size()) {
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
        }
        const std::string entity = trim(fields[static_cast<std::size_t>(entity_col)]);
        if (entity.empty()) {
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty entity id");
        }
        const Date date = Date::parse(trim(fields[static_cast<std::size_t>(date_col)]));

        std::vector<double> vals(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const std::string where = "(" + entity + ", " + date.to_string() + ", " +
                                      schema[i].name + ") [" + origin + ":" +
                                      std::to_string(lineno) + "]";
            vals[i] = parse_number(fields[static_cast<std::size_t>(var_col[i])], where);
        }
        auto [it, inserted] = rows.emplace(Key{entity, date.days()}, std::move(vals));
        if (!inserted) {
            throw ValidationError("duplicate (entity, date) key (" + entity + ", " +
                                  date.to_string() + ") at " + origin + ":" +
                                  std::to_string(lineno));
        }
        date_set.insert(date.days());
    }
    if (rows.empty()) throw ValidationError("no data rows in " + origin);

    std::vector<Date> dates;
    dates.reserve(date_set.size());
    for (int d : date_set) dates.emplace_back(d);
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] - dates[i - 1] != 1) {
            throw ValidationError("date gap between " + dates[i - 1].to_string() + " and " +
                                  dates[i].to_string() + " in " + origin);
        }
    }

    std::vector<std::string> entities;
    for (const auto& [key, vals] : rows) {
        if (entities.empty() || entities.back() != key.entity) entities.push_back(key.entity);
    }

    // Every entity must cover every date.
    std::vector<double> values;
    values.reserve(entities.size() * dates.size() * schema.size());
    for (const auto& entity : entities) {
        for (const auto& date : dates) {
            auto it = rows.find(Key{entity, date.days()});
            if (it == rows.end()) {
                throw ValidationError("missing row for (" + entity + ", " + date.to_string() +
                                      ") in " + origin);
            }
            values.insert(values.end(), it->second.begin(), it->second.end());
        }
    }
    return PanelDataset(std::move(entities), std::move(dates), schema, std::move(values));
}

PanelDataset ingest_csv(const std::string& path, const std::vector<VariableSpec>& schema) {
    return ingest_csv_text(read_file(path), schema, path);
}

PanelDataset apply_transforms(const PanelDataset& data) {
    if (data.transforms_applied()) {
        throw ValidationError("transforms already applied to this dataset");
    }
    std::vector<double> values = data.values();
    const auto& vars = data.variables();
    for (std::size_t e = 0; e < data.n_entities(); ++e) {
        for (std::size_t d = 0; d < data.n_dates(); ++d) {
            for (std::size_t v = 0; v < vars.size(); ++v) {
                if (vars[v].transform != VarTransform::natural_log) continue;
                const std::size_t idx = (e * data.n_dates() + d) * vars.size() + v;
                if (values[idx] <= 0.0) {
                    throw ValidationError("non-positive value " + format_g6(values[idx]) +
                                          " under natural-log at (" + data.entities()[e] + ", " +
                                          data.dates()[d].to_string() + ", " + vars[v].name + ")");
                }
                values[idx] = std::log(values[idx]);
            }
        }
    }
    return PanelDataset(data.entities(), data.dates(), vars, std::move(values), true);
}

std::pair<PanelDataset, PanelDataset> split_by_date(const PanelDataset& data,
                                                    const SplitSpec& spec) {
    if (!(spec.train_end < spec.test_start)) {
        throw ValidationError("split requires train_end < test_start");
    }
    if (!(spec.test_start <= spec.test_end)) {
        throw ValidationError("split requires test_start <= test_end");
    }
    const Date first = data.dates().front();
    const Date last = data.dates().back();
    if (spec.train_end < first || spec.test_end > last) {
        throw ValidationError("split window [" + first.to_string() + ", " + last.to_string() +
                              "] does not contain the requested boundaries");
    }

    auto take = [&](Date lo, Date hi) {
        std::vector<Date> dates;
        std::vector<std::size_t> idx;
        for (std::size_t d = 0; d < data.n_dates(); ++d) {
            if (data.dates()[d] >= lo && data.dates()[d] <= hi) {
                dates.push_back(data.dates()[d]);
                idx.push_back(d);
            }
        }
        if (dates.empty()) {
            throw ValidationError("empty partition [" + lo.to_string() + ", " + hi.to_string() +
                                  "]");
        }
        const std::size_t nv = data.n_variables();
        std::vector<double> values;
        values.reserve(data.n_entities() * dates.size() * nv);
        for (std::size_t e = 0; e < data.n_entities(); ++e) {
            for (std::size_t d : idx) {
                for (std::size_t v = 0; v < nv; ++v) values.push_back(data.value(e, d, v));
            }
        }
        return PanelDataset(data.entities(), std::move(dates), data.variables(),
                            std::move(values), data.transforms_applied());
    };
    return {take(first, spec.train_end), take(spec.test_start, spec.test_end)};
}

std::size_t StandardizationParams::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw ValidationError("variable '" + name + "' not covered by standardization params");
}

StandardizationParams standardize_fit(const PanelDataset& data,
                                      const std::vector<std::string>& vars) {
    StandardizationParams params;
    const double n = static_cast<double>(data.n_rows());
    for (const auto& name : vars) {
        const std::size_t v = data.variable_index(name);
        const bool is_binary = data.variables()[v].kind == VarKind::binary;

        double mean = 0.0, sd = 1.0;
        if (!is_binary) {
            double sum = 0.0;
            for (std::size_t e = 0; e < data.n_entities(); ++e) {
                for (std::size_t d = 0; d < data.n_dates(); ++d) sum += data.value(e, d, v);
            }
            mean = sum / n;
            double ss = 0.0;
            for (std::size_t e = 0; e < data.n_entities(); ++e) {
                for (std::size_t d = 0; d < data.n_dates(); ++d) {
                    const double c = data.value(e, d, v) - mean;
                    ss += c * c;
                }
            }
            if (n < 2 || ss <= 0.0) {
                throw ValidationError("zero variance in continuous variable '" + name +
                                      "' on the fitting partition");
            }
            sd = std::sqrt(ss / (n - 1.0));
        }
        params.names.push_back(name);
        params.means.push_back(mean);
        params.sds.push_back(sd);
        params.exempt.push_back(is_binary);
    }
    return params;
}

namespace {

PanelDataset rescale(const StandardizationParams& params, const PanelDataset& data,
                     bool forward) {
    std::vector<double> values = data.values();
    const std::size_t nv = data.n_variables();
    for (std::size_t i = 0; i < params.names.size(); ++i) {
        if (params.exempt[i]) continue;
        const std::size_t v = data.variable_index(params.names[i]);
        for (std::size_t e = 0; e < data.n_entities(); ++e) {
            for (std::size_t d = 0; d < data.n_dates(); ++d) {
                double& cell = values[(e * data.n_dates() + d) * nv + v];
                cell = forward ? (cell - params.means[i]) / params.sds[i]
                               : cell * params.sds[i] + params.means[i];
            }
        }
    }
    return PanelDataset(data.entities(), data.dates(), data.variables(), std::move(values),
                        data.transforms_applied());
}

}  // namespace

PanelDataset standardize_apply(const StandardizationParams& params, const PanelDataset& data) {
    return rescale(params, data, true);
}

PanelDataset standardize_invert(const StandardizationParams& params, const PanelDataset& data) {
    return rescale(params, data, false);
}

void write_csv(const PanelDataset& data, std::ostream& out,
               const std::vector<std::string>& comment_lines) {
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "entity,date";
    for (const auto& v : data.variables()) out << "," << v.name;
    out << "\n";
    char buf[40];
    for (std::size_t e = 0; e < data.n_entities(); ++e) {
        for (std::size_t d = 0; d < data.n_dates(); ++d) {
            out << data.entities()[e] << "," << data.dates()[d].to_string();
            for (std::size_t v = 0; v < data.n_variables(); ++v) {
                std::snprintf(buf, sizeof(buf), "%.17g", data.value(e, d, v));
                out << "," << buf;
            }
            out << "\n";
        }
    }
}

std::string to_csv(const PanelDataset& data, const std::vector<std::string>& comment_lines) {
    std::ostringstream ss;
    write_csv(data, ss, comment_lines);
    return ss.str();
}

}  // namespace causalpred
