#include "tensor_kernel.hpp"

#include <numeric>

namespace causkit::detail {

std::vector<std::size_t> strides_of(std::span<const std::size_t> ext) {
  std::vector<std::size_t> s(ext.size(), 1);
  for (std::size_t k = ext.size(); k-- > 1;) s[k - 1] = s[k] * ext[k];
  return s;
}

std::size_t volume(std::span<const std::size_t> ext) {
  return std::accumulate(ext.begin(), ext.end(), std::size_t{1},
                         std::multiplies<>());
}

namespace {

// Offsets of every multi-index over `axes` (row-major over those axes).
std::vector<std::size_t> offsets(std::span<const std::size_t> ext,
                                 std::span<const std::size_t> stride,
                                 std::span<const std::size_t> axes) {
  std::vector<std::size_t> out{0};
  for (std::size_t ax : axes) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * ext[ax]);
    for (std::size_t base : out)
      for (std::size_t i = 0; i < ext[ax]; ++i) next.push_back(base + i * stride[ax]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Complex> permute_axes(std::span<const Complex> data,
                                  std::span<const std::size_t> ext,
                                  std::span<const std::size_t> perm) {
  auto stride = strides_of(ext);
  auto offs = offsets(ext, stride, perm);
  std::vector<Complex> out(offs.size());
  for (std::size_t k = 0; k < offs.size(); ++k) out[k] = data[offs[k]];
  return out;
}

std::vector<Complex> contract(
    std::span<const Complex> a, std::span<const std::size_t> a_ext,
    std::span<const Complex> b, std::span<const std::size_t> b_ext,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<bool> a_used(a_ext.size(), false), b_used(b_ext.size(), false);
  std::vector<std::size_t> a_c, b_c;
  for (auto [x, y] : pairs) {
    a_used[x] = b_used[y] = true;
    a_c.push_back(x);
    b_c.push_back(y);
  }
  std::vector<std::size_t> a_f, b_f;
  for (std::size_t k = 0; k < a_ext.size(); ++k)
    if (!a_used[k]) a_f.push_back(k);
  for (std::size_t k = 0; k < b_ext.size(); ++k)
    if (!b_used[k]) b_f.push_back(k);

  auto a_s = strides_of(a_ext), b_s = strides_of(b_ext);
  auto af = offsets(a_ext, a_s, a_f), bf = offsets(b_ext, b_s, b_f);
  auto ac = offsets(a_ext, a_s, a_c), bc = offsets(b_ext, b_s, b_c);

  std::vector<Complex> out(af.size() * bf.size());
  for (std::size_t i = 0; i < af.size(); ++i) {
    for (std::size_t j = 0; j < bf.size(); ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < ac.size(); ++c) {
        const Complex& x = a[af[i] + ac[c]];
        if (x == Complex{}) continue;
        acc += x * b[bf[j] + bc[c]];
      }
      out[i * bf.size() + j] = acc;
    }
  }
  return out;
}

std::vector<Complex> self_trace(
    std::span<const Complex> a, std::span<const std::size_t> a_ext,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  auto stride = strides_of(a_ext);
  std::vector<bool> used(a_ext.size(), false);
  std::vector<std::size_t> diag{0};
  for (auto [x, y] : pairs) {
    used[x] = used[y] = true;
    std::vector<std::size_t> next;
    for (std::size_t base : diag)
      for (std::size_t i = 0; i < a_ext[x]; ++i)
        next.push_back(base + i * (stride[x] + stride[y]));
    diag = std::move(next);
  }
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < a_ext.size(); ++k)
    if (!used[k]) free.push_back(k);
  auto fo = offsets(a_ext, stride, free);
  std::vector<Complex> out(fo.size());
  for (std::size_t i = 0; i < fo.size(); ++i) {
    Complex acc{0.0, 0.0};
    for (std::size_t d : diag) acc += a[fo[i] + d];
    out[i] = acc;
  }
  return out;
}

void saturate(std::vector<Complex>& data) {
  for (auto& x : data) x = (x != Complex{}) ? Complex{1.0, 0.0} : Complex{};
}

}  // namespace causkit::detail
