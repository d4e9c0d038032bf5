#pragma once

#include <ostream>

#include "meshcoop/allocation.hpp"
#include "meshcoop/partition.hpp"

namespace meshcoop {

// Plain-text renderings used by the command-line tool. Numbers are printed
// with four decimals; `csv` switches to comma-separated rows with a header.

void print_values(std::ostream& os, const CharacteristicFunction& cf, bool csv);
void print_value(std::ostream& os, const CharacteristicFunction& cf, Coalition coalition, bool csv);
void print_allocation(std::ostream& os, const CharacteristicFunction& cf, const Allocation& x, bool csv);
void print_core_report(std::ostream& os, const CoreReport& report, bool csv);
void print_breakdown(std::ostream& os, const PayoffBreakdown& breakdown, bool csv);

// Columns: structure, μ_1..μ_M, φ_1..φ_M, v.
void print_structure_table(std::ostream& os, const PayoffMatrix& table, bool csv);

}  // namespace meshcoop
