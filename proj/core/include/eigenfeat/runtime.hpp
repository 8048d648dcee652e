#pragma once

namespace eigenfeat {

/// Process-wide malloc tuning for training workloads: keeps large activation
/// buffers on the heap instead of fresh mmap pages for every allocation.
/// Meant for executables; a no-op outside glibc.
void configure_allocator() noexcept;

}  // namespace eigenfeat
