#include "aplr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "aplr/csv.hpp"

namespace aplr {

namespace {

std::string trim_trailing(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.pop_back();
    return s;
}

int likert_predictor_value(const std::string& s) {
    if (s == "Strongly disagree") return -2;
    if (s == "Disagree") return -1;
    if (s == "Neutral") return 0;
    if (s == "Agree") return 1;
    if (s == "Strongly agree") return 2;
    throw data_error("not a Likert response");
}

[[noreturn]] void bad_cell(std::size_t row, const std::string& column, const std::string& value,
                           const char* expected) {
    std::ostringstream msg;
    msg << "row " << row << ", column '" << column << "': unrecognized value '" << value << "' ("
        << expected << " expected)";
    throw data_error(msg.str());
}

}  // namespace

const ColumnEncoding* EncodingSchema::find(const std::string& name) const {
    for (const auto& [col, enc] : columns)
        if (col == name) return &enc;
    return nullptr;
}

void EncodingSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& [col, enc] : columns) {
        if (!seen.insert(col).second)
            throw config_error("schema lists column '" + col + "' twice");
        if (enc.rule == EncodingRule::one_of_n) {
            if (enc.categories.size() < 2)
                throw config_error("one_of_n column '" + col + "' needs at least two categories");
            std::set<std::string> cats(enc.categories.begin(), enc.categories.end());
            if (cats.size() != enc.categories.size())
                throw config_error("one_of_n column '" + col + "' has duplicate categories");
        }
    }
}

TargetSpec TargetSpec::default_satisfaction() {
    return TargetSpec{
        {{"m_suitable", Polarity::positive},
         {"m_comfortable", Polarity::positive},
         {"m_feedback", Polarity::negative},
         {"m_valuable", Polarity::positive},
         {"m_sameMethod", Polarity::positive},
         {"m_taskPerformance", Polarity::positive},
         {"emo_miss", Polarity::negative}},
        4};
}

void TargetSpec::validate() const {
    if (components.empty()) throw config_error("target spec has no components");
    std::set<std::string> seen;
    for (const auto& [col, pol] : components)
        if (!seen.insert(col).second)
            throw config_error("target spec lists component '" + col + "' twice");
    int n = static_cast<int>(components.size());
    if (threshold < -n || threshold > n)
        throw config_error("target threshold outside [-" + std::to_string(n) + ", " +
                           std::to_string(n) + "]");
}

RawSurveyTable load_survey(const std::filesystem::path& path, const EncodingSchema& schema) {
    CsvTable csv = read_csv(path);

    RawSurveyTable raw;
    raw.column_names.reserve(csv.header.size());
    for (auto& h : csv.header) raw.column_names.push_back(trim_trailing(std::move(h)));

    std::set<std::string> header_set(raw.column_names.begin(), raw.column_names.end());
    if (header_set.size() != raw.column_names.size())
        throw data_error(path.string() + ": duplicate column names in header");
    for (const auto& [col, enc] : schema.columns)
        if (!header_set.contains(col))
            throw data_error(path.string() + ": schema column '" + col + "' absent from header");

    raw.rows.reserve(csv.rows.size());
    for (auto& row : csv.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (auto& c : row) cells.push_back(trim_trailing(std::move(c)));
        raw.rows.push_back(std::move(cells));
    }
    return raw;
}

EncodedMatrix encode_predictors(const RawSurveyTable& raw, const EncodingSchema& schema) {
    schema.validate();

    // Resolve schema columns against the raw header and build output names.
    struct Source {
        std::size_t raw_col;
        const ColumnEncoding* enc;
        const std::string* name;
        std::size_t out_col;  // first output column
    };
    std::vector<Source> sources;
    std::vector<std::string> out_names;
    for (const auto& [col, enc] : schema.columns) {
        auto it = std::find(raw.column_names.begin(), raw.column_names.end(), col);
        if (it == raw.column_names.end())
            throw data_error("schema column '" + col + "' absent from table");
        std::size_t raw_col = static_cast<std::size_t>(it - raw.column_names.begin());
        sources.push_back({raw_col, &enc, &col, out_names.size()});
        if (enc.rule == EncodingRule::one_of_n) {
            for (const auto& cat : enc.categories) out_names.push_back(col + "_" + cat);
        } else {
            out_names.push_back(col);
        }
    }

    EncodedMatrix x(raw.rows.size(), std::move(out_names));
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        const auto& row = raw.rows[i];
        for (const auto& src : sources) {
            const std::string& cell = row[src.raw_col];
            switch (src.enc->rule) {
                case EncodingRule::likert5:
                    try {
                        x(i, src.out_col) = likert_predictor_value(cell);
                    } catch (const data_error&) {
                        bad_cell(i, *src.name, cell, "5-point Likert response");
                    }
                    break;
                case EncodingRule::yes_no:
                    if (cell == "Yes")
                        x(i, src.out_col) = 1.0;
                    else if (cell == "No")
                        x(i, src.out_col) = 0.0;
                    else
                        bad_cell(i, *src.name, cell, "Yes/No");
                    break;
                case EncodingRule::one_of_n: {
                    auto cat = std::find(src.enc->categories.begin(), src.enc->categories.end(),
                                         cell);
                    if (cat == src.enc->categories.end())
                        bad_cell(i, *src.name, cell, "listed category");
                    x(i, src.out_col +
                             static_cast<std::size_t>(cat - src.enc->categories.begin())) = 1.0;
                    break;
                }
                case EncodingRule::already_numeric: {
                    double v = 0.0;
                    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                        bad_cell(i, *src.name, cell, "numeric value");
                    if (!std::isfinite(v)) bad_cell(i, *src.name, cell, "finite numeric value");
                    x(i, src.out_col) = v;
                    break;
                }
            }
        }
    }
    return x;
}

Labels build_target(const RawSurveyTable& raw, const TargetSpec& spec) {
    spec.validate();

    std::vector<std::pair<std::size_t, Polarity>> comps;
    for (const auto& [col, pol] : spec.components) {
        auto it = std::find(raw.column_names.begin(), raw.column_names.end(), col);
        if (it == raw.column_names.end())
            throw data_error("target component column '" + col + "' absent from table");
        comps.emplace_back(static_cast<std::size_t>(it - raw.column_names.begin()), pol);
    }

    Labels out;
    out.kind = LabelKind::binary;
    out.y.reserve(raw.rows.size());
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        int sum = 0;
        for (const auto& [col, pol] : comps) {
            const std::string& cell = raw.rows[i][col];
            int v;
            try {
                int likert = likert_predictor_value(cell);
                v = likert < 0 ? -1 : likert > 0 ? 1 : 0;
            } catch (const data_error&) {
                bad_cell(i, raw.column_names[col], cell, "5-point Likert response");
            }
            sum += pol == Polarity::positive ? v : -v;
        }
        out.y.push_back(sum >= spec.threshold ? 1.0 : 0.0);
    }
    return out;
}

namespace {

// Class label -> member rows, keys in ascending label order.
std::map<double, std::vector<std::size_t>> group_by_class(const Labels& y) {
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < y.size(); ++i) groups[y.y[i]].push_back(i);
    return groups;
}

}  // namespace

SplitResult stratified_split(const EncodedMatrix& x, const Labels& y, double test_fraction,
                             std::uint64_t seed) {
    if (x.rows() != y.size()) throw data_error("matrix and labels disagree on row count");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw config_error("test_fraction must lie in (0, 1)");

    auto groups = group_by_class(y);
    for (const auto& [label, members] : groups)
        if (members.size() < 2)
            throw data_error("class " + format_double(label) + " has fewer than 2 members");

    std::size_t n = y.size();
    std::size_t train_target = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * (1.0 - test_fraction)));

    // Largest-remainder apportionment of the train quota across classes keeps
    // every class within one sample of exact proportionality.
    struct ClassPlan {
        double label;
        std::vector<std::size_t>* members;
        std::size_t take;
        double remainder;
    };
    std::vector<ClassPlan> plan;
    std::size_t assigned = 0;
    for (auto& [label, members] : groups) {
        double exact = static_cast<double>(members.size()) * (1.0 - test_fraction);
        std::size_t take = static_cast<std::size_t>(std::floor(exact));
        plan.push_back({label, &members, take, exact - std::floor(exact)});
        assigned += take;
    }
    std::vector<std::size_t> order(plan.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plan[a].remainder > plan[b].remainder;
    });
    for (std::size_t i = 0; assigned < train_target && i < order.size(); ++i) {
        auto& p = plan[order[i]];
        if (p.take < p.members->size()) {
            ++p.take;
            ++assigned;
        }
    }
    if (assigned != train_target)
        throw data_error("cannot reach requested split sizes with the given classes");

    Rng rng(seed);
    std::vector<std::size_t> train_idx, test_idx;
    for (auto& p : plan) {
        rng.shuffle(*p.members);
        for (std::size_t i = 0; i < p.members->size(); ++i)
            (i < p.take ? train_idx : test_idx).push_back((*p.members)[i]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitResult out;
    out.train_x = x.take_rows(train_idx);
    out.test_x = x.take_rows(test_idx);
    out.train_y.kind = out.test_y.kind = y.kind;
    for (auto i : train_idx) out.train_y.y.push_back(y.y[i]);
    for (auto i : test_idx) out.test_y.y.push_back(y.y[i]);
    out.train_idx = std::move(train_idx);
    out.test_idx = std::move(test_idx);
    return out;
}

std::vector<int> stratified_fold_assignment(const Labels& y, int k, std::uint64_t seed) {
    if (k < 2) throw config_error("fold count must be at least 2");
    auto groups = group_by_class(y);
    std::vector<int> fold(y.size(), 0);
    Rng rng(seed);
    for (auto& [label, members] : groups) {
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i)
            fold[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fold;
}

std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw config_error("fold count must be at least 2");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<int> fold(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        fold[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return fold;
}

EncodedFrame read_encoded_csv(const std::filesystem::path& path,
                              const std::string& label_column) {
    CsvTable csv = read_csv(path);

    std::ptrdiff_t label_col = -1;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < csv.header.size(); ++j) {
        if (csv.header[j] == label_column)
            label_col = static_cast<std::ptrdiff_t>(j);
        else
            names.push_back(csv.header[j]);
    }

    EncodedFrame out;
    out.x = EncodedMatrix(csv.rows.size(), std::move(names));
    std::vector<double> labels;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        std::size_t out_j = 0;
        for (std::size_t j = 0; j < csv.header.size(); ++j) {
            const std::string& cell = csv.rows[i][j];
            double v = 0.0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                std::ostringstream msg;
                msg << path.string() << ": row " << i << ", column '" << csv.header[j]
                    << "': not numeric: '" << cell << "'";
                throw data_error(msg.str());
            }
            if (static_cast<std::ptrdiff_t>(j) == label_col)
                labels.push_back(v);
            else
                out.x(i, out_j++) = v;
        }
    }
    if (label_col >= 0) {
        bool binary = std::all_of(labels.begin(), labels.end(),
                                  [](double v) { return v == 0.0 || v == 1.0; });
        out.y = Labels{std::move(labels), binary ? LabelKind::binary : LabelKind::real};
    }
    return out;
}

void write_encoded_csv(const std::filesystem::path& path, const EncodedMatrix& x,
                       const Labels* y, const std::string& label_column) {
    CsvTable csv;
    csv.header = x.column_names();
    if (y) {
        if (y->size() != x.rows()) throw data_error("matrix and labels disagree on row count");
        csv.header.push_back(label_column);
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(csv.header.size());
        for (std::size_t j = 0; j < x.cols(); ++j) row.push_back(format_double(x(i, j)));
        if (y) row.push_back(format_double(y->y[i]));
        csv.rows.push_back(std::move(row));
    }
    write_csv(path, csv);
}

}  // namespace aplr
