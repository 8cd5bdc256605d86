#pragma once

#include <cstddef>

// Heap accounting for the acceptance binary. malloc/calloc/realloc/free are
// interposed in alloc_tracker.cpp; sizes come from malloc_usable_size.
namespace alloc_tracker {

std::size_t current_bytes();
std::size_t peak_bytes();
/// Sets the peak to the current live total.
void reset_peak();

}  // namespace alloc_tracker
