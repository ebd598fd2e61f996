#pragma once

// Dense row-major kernels shared by the tensor core. Not part of the public
// interface.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "causkit/process.hpp"

namespace causkit::detail {

std::vector<std::size_t> strides_of(std::span<const std::size_t> ext);
std::size_t volume(std::span<const std::size_t> ext);

/// result axis k = source axis perm[k].
std::vector<Complex> permute_axes(std::span<const Complex> data,
                                  std::span<const std::size_t> ext,
                                  std::span<const std::size_t> perm);

/**
 * Contracts axes pairs (a_axis, b_axis). Result axes: A's free axes in order,
 * then B's free axes in order.
 **/
std::vector<Complex> contract(
    std::span<const Complex> a, std::span<const std::size_t> a_ext,
    std::span<const Complex> b, std::span<const std::size_t> b_ext,
    std::span<const std::pair<std::size_t, std::size_t>> pairs);

/// Traces out pairs of axes of one tensor; remaining axes keep their order.
std::vector<Complex> self_trace(
    std::span<const Complex> a, std::span<const std::size_t> a_ext,
    std::span<const std::pair<std::size_t, std::size_t>> pairs);

/// Boolean semiring projection for rel: nonzero -> 1.
void saturate(std::vector<Complex>& data);

}  // namespace causkit::detail
