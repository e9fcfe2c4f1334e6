#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>

#include "tsms/dgp.hpp"
#include "tsms/experiments.hpp"

namespace tsms {

using AnyDataset = std::variant<Dataset, MultiDataset>;

/// Header `y,x1,...,xd` gives a binary Dataset; `y,x1_1,...,x1_d,...,xJ_d`
/// gives a MultiDataset with J inferred. Rows outside the open unit ball,
/// non-numeric cells and ragged rows are reported together by row number
/// (1-based, header excluded).
AnyDataset parse_dataset_csv(std::istream& in);
AnyDataset load_dataset_csv(const std::string& path);

/// Writes with 17 significant digits so a reload reproduces every double.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(std::ostream& out, const MultiDataset& data);

/// `key = value` per line, `#` starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Builds and validates an ExperimentSpec from config keys. Unknown keys are
/// rejected.
ExperimentSpec experiment_spec_from_config(const std::map<std::string, std::string>& config);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace tsms
