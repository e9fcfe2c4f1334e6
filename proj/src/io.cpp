#include "tsms/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "tsms/errors.hpp"

namespace tsms {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

bool parse_double(const std::string& text, double& value) {
    if (text.empty()) return false;
    const char* begin = text.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

std::string join_rows(const std::vector<std::size_t>& rows) {
    std::string out;
    for (std::size_t k = 0; k < rows.size() && k < 20; ++k) {
        if (k) out += ", ";
        out += "row " + std::to_string(rows[k]);
    }
    if (rows.size() > 20) out += ", ... (" + std::to_string(rows.size()) + " rows)";
    return out;
}

struct Layout {
    bool multi = false;
    std::size_t J = 1;
    std::size_t d = 0;
};

Layout parse_header(const std::vector<std::string>& header) {
    if (header.size() < 3 || header[0] != "y") {
        throw ValidationError("malformed header: expected y,x1,...,xd or y,x1_1,...,xJ_d");
    }
    Layout layout;
    layout.multi = header[1].find('_') != std::string::npos;
    const std::size_t columns = header.size() - 1;
    if (!layout.multi) {
        layout.d = columns;
        for (std::size_t k = 0; k < columns; ++k) {
            if (header[k + 1] != "x" + std::to_string(k + 1)) {
                throw ValidationError("malformed header: column " + std::to_string(k + 2) + " should be x" +
                                      std::to_string(k + 1) + ", got '" + header[k + 1] + "'");
            }
        }
        return layout;
    }
    // Multi-index: read d from the run of x1_* columns, then check the rest.
    std::size_t d = 0;
    while (d < columns && header[d + 1].rfind("x1_", 0) == 0) ++d;
    if (d == 0 || columns % d != 0) throw ValidationError("malformed multi-index header");
    layout.d = d;
    layout.J = columns / d;
    for (std::size_t j = 0; j < layout.J; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::string expected = "x" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
            if (header[1 + j * d + k] != expected) {
                throw ValidationError("malformed header: expected '" + expected + "', got '" +
                                      header[1 + j * d + k] + "'");
            }
        }
    }
    if (layout.J < 2) throw ValidationError("multi-index header needs J >= 2 blocks");
    return layout;
}

}  // namespace

AnyDataset parse_dataset_csv(std::istream& in) {
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    if (trim(line).empty()) throw ValidationError("malformed header: file is empty");
    const Layout layout = parse_header(split(trim(line), ','));
    const std::size_t columns = 1 + layout.J * layout.d;

    std::vector<double> y;
    std::vector<double> x;
    std::vector<std::size_t> bad_cells, ragged, outside, bad_y;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split(trim(line), ',');
        if (cells.size() != columns) {
            ragged.push_back(row);
            continue;
        }
        std::vector<double> values(columns);
        bool ok = true;
        for (std::size_t c = 0; c < columns; ++c) ok = parse_double(cells[c], values[c]) && ok;
        if (!ok) {
            bad_cells.push_back(row);
            continue;
        }
        if (!layout.multi && values[0] != 0.0 && values[0] != 1.0) bad_y.push_back(row);
        for (std::size_t j = 0; j < layout.J; ++j) {
            double norm2 = 0.0;
            for (std::size_t k = 0; k < layout.d; ++k) norm2 += values[1 + j * layout.d + k] * values[1 + j * layout.d + k];
            if (norm2 >= 1.0) {
                outside.push_back(row);
                break;
            }
        }
        y.push_back(values[0]);
        x.insert(x.end(), values.begin() + 1, values.end());
    }

    std::string problems;
    if (!ragged.empty()) problems += "wrong column count at " + join_rows(ragged) + "; ";
    if (!bad_cells.empty()) problems += "non-numeric cell at " + join_rows(bad_cells) + "; ";
    if (!bad_y.empty()) problems += "binary outcome not 0/1 at " + join_rows(bad_y) + "; ";
    if (!outside.empty()) problems += "covariates outside the open unit ball at " + join_rows(outside) + "; ";
    if (!problems.empty()) throw ValidationError(problems.substr(0, problems.size() - 2));
    if (y.empty()) throw ValidationError("dataset has no rows");

    RowMatrix X(static_cast<Eigen::Index>(y.size()), static_cast<Eigen::Index>(columns - 1));
    std::copy(x.begin(), x.end(), X.data());
    if (layout.multi) {
        MultiDataset data{std::move(y), std::move(X), layout.J};
        data.validate();
        return data;
    }
    Dataset data{std::move(y), std::move(X)};
    data.validate();
    return data;
}

AnyDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset '" + path + "'");
    return parse_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "y";
    for (std::size_t k = 0; k < data.d(); ++k) out << ",x" << k + 1;
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << data.y[i];
        for (std::size_t k = 0; k < data.d(); ++k) out << ',' << data.row(i)[k];
        out << '\n';
    }
}

void write_dataset_csv(std::ostream& out, const MultiDataset& data) {
    out << "y";
    for (std::size_t j = 0; j < data.J; ++j) {
        for (std::size_t k = 0; k < data.d(); ++k) out << ",x" << j + 1 << '_' << k + 1;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << data.y[i];
        for (double v : data.point(i)) out << ',' << v;
        out << '\n';
    }
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ValidationError("config line " + std::to_string(number) + ": empty key");
        if (out.count(key)) throw ValidationError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& cell : split(text, ',')) {
        double v = 0.0;
        if (!parse_double(cell, v)) throw ValidationError("expected a comma-separated number list, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

namespace {

std::size_t to_count(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("config key '" + key + "' needs a nonnegative integer, got '" + text + "'");
    }
    return v;
}

double to_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    if (!parse_double(text, v)) throw ValidationError("config key '" + key + "' needs a number, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ValidationError("config key '" + key + "' needs true or false, got '" + text + "'");
}

Vector to_vector(const std::vector<double>& values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) v[static_cast<Eigen::Index>(k)] = values[k];
    return v;
}

}  // namespace

ExperimentSpec experiment_spec_from_config(const std::map<std::string, std::string>& config) {
    static const std::set<std::string> known = {
        "estimator", "d",        "J",          "p",      "theta0",       "error",  "error_scale", "error_slope",
        "link_scale", "noise_sd", "n_grid",    "replications", "bandwidth", "seed", "oracle",    "split_sample",
        "resolution", "rounds",  "shrink",     "multistart",   "probes",    "threads"};
    for (const auto& [key, value] : config) {
        if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = config.find(key);
        return it == config.end() ? nullptr : &it->second;
    };

    ExperimentSpec spec;
    if (auto v = get("estimator")) spec.estimator = estimator_from_string(*v);
    if (auto v = get("d")) spec.d = to_count("d", *v);
    if (auto v = get("J")) spec.J = to_count("J", *v);
    if (auto v = get("p")) spec.p = static_cast<int>(to_count("p", *v));
    if (auto v = get("theta0")) {
        spec.theta0 = Direction::normalized(to_vector(parse_number_list(*v)));
    } else {
        spec.theta0 = Direction::normalized(Vector::Ones(static_cast<Eigen::Index>(std::max<std::size_t>(spec.d, 2))));
    }
    const double scale = get("error_scale") ? to_real("error_scale", *get("error_scale")) : 1.0;
    const std::string family = get("error") ? *get("error") : "logistic";
    if (family == "logistic") {
        spec.error = ErrorSpec::logistic(scale);
    } else if (family == "gaussian") {
        spec.error = ErrorSpec::gaussian(scale);
    } else if (family == "hetero") {
        const auto slope = get("error_slope") ? to_vector(parse_number_list(*get("error_slope")))
                                              : Vector(Vector::Zero(static_cast<Eigen::Index>(spec.d)));
        spec.error = ErrorSpec::heteroskedastic_logistic(scale, slope);
    } else {
        throw ValidationError("unknown error family '" + family + "' (expected logistic, gaussian, hetero)");
    }
    if (auto v = get("link_scale")) spec.link.scale = to_real("link_scale", *v);
    if (auto v = get("noise_sd")) spec.noise_sd = to_real("noise_sd", *v);
    if (auto v = get("n_grid")) {
        spec.n_grid.clear();
        for (double n : parse_number_list(*v)) {
            if (!(n >= 1.0) || n != std::floor(n)) throw ValidationError("n_grid entries must be positive integers");
            spec.n_grid.push_back(static_cast<std::size_t>(n));
        }
    }
    if (auto v = get("replications")) spec.replications = to_count("replications", *v);
    if (auto v = get("bandwidth")) spec.bandwidth = BandwidthChoice::parse(*v);
    if (auto v = get("seed")) spec.base_seed = to_count("seed", *v);
    if (auto v = get("oracle")) spec.oracle_first_stage = to_bool("oracle", *v);
    if (auto v = get("split_sample")) spec.split_sample = to_bool("split_sample", *v);
    if (auto v = get("resolution")) spec.optimizer.resolution = to_count("resolution", *v);
    if (auto v = get("rounds")) spec.optimizer.rounds = to_count("rounds", *v);
    if (auto v = get("shrink")) spec.optimizer.shrink = to_real("shrink", *v);
    if (auto v = get("multistart")) spec.optimizer.multistart = to_count("multistart", *v);
    if (auto v = get("probes")) spec.optimizer.probes = to_count("probes", *v);
    if (auto v = get("threads")) spec.threads = to_count("threads", *v);
    spec.validate();
    return spec;
}

}  // namespace tsms
