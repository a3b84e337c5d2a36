#pragma once

#include <string>
#include <vector>

#include "guplab/bounds.hpp"

namespace guplab {

/// JSON array, one object per report with a fixed field order.
std::string reports_to_json(const std::vector<RelationReport>& reports);

/// Tab-separated table with a header row; numbers at 17 significant digits.
/// Diagnostic columns are the union of keys in first-seen order.
std::string reports_to_table(const std::vector<RelationReport>& reports);

/// Number formatted for reports: 17 significant digits, "nan"/"inf" spelled out.
std::string format_number(double v);

/// Writes text to path, creating parent directories. IoError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace guplab
