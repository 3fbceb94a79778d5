// SPDX-License-Identifier: Apache-2.0
//
// hdr-ris: tensor-based channel estimation for RIS-assisted MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HDR_TENSOR_HPP
#define HDR_TENSOR_HPP

#include "hdr/linalg.hpp"

#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace hdr {

using Shape = std::vector<std::size_t>;

inline std::size_t element_count(std::span<const std::size_t> dims)
{
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(std::span<const std::size_t> dims)
{
    std::string s = "[";
    for (std::size_t i = 0; i < dims.size(); ++i)
        s += (i ? "," : "") + std::to_string(dims[i]);
    return s + "]";
}

/// Dense complex N-way array, column-major (mode 0 varies fastest).
class ComplexTensor {
  public:
    explicit ComplexTensor(Shape dims) : dims_(std::move(dims))
    {
        check_dims();
        data_ = Vector::Zero(static_cast<Index>(element_count(dims_)));
    }

    ComplexTensor(Shape dims, Vector data) : dims_(std::move(dims)), data_(std::move(data))
    {
        check_dims();
        if (static_cast<std::size_t>(data_.size()) != element_count(dims_))
            throw DimensionError("ComplexTensor: " + std::to_string(data_.size()) + " entries do not fill shape " +
                                 shape_string(dims_));
    }

    [[nodiscard]] const Shape& dims() const { return dims_; }
    [[nodiscard]] std::size_t order() const { return dims_.size(); }
    [[nodiscard]] std::size_t extent(std::size_t mode) const { return dims_.at(mode); }
    [[nodiscard]] Index size() const { return data_.size(); }
    [[nodiscard]] const Vector& data() const { return data_; }
    [[nodiscard]] Vector& data() { return data_; }
    [[nodiscard]] double norm() const { return data_.norm(); }

    [[nodiscard]] Index linear_index(std::span<const std::size_t> idx) const
    {
        if (idx.size() != dims_.size())
            throw DimensionError("ComplexTensor: index arity mismatch");
        std::size_t lin = 0;
        for (std::size_t m = dims_.size(); m-- > 0;) {
            if (idx[m] >= dims_[m])
                throw DimensionError("ComplexTensor: index out of range");
            lin = lin * dims_[m] + idx[m];
        }
        return static_cast<Index>(lin);
    }

    cplx& operator()(std::initializer_list<std::size_t> idx) { return data_(linear_index({idx.begin(), idx.size()})); }
    const cplx& operator()(std::initializer_list<std::size_t> idx) const
    {
        return data_(linear_index({idx.begin(), idx.size()}));
    }

  private:
    void check_dims() const
    {
        if (dims_.empty())
            throw DimensionError("ComplexTensor: order must be at least 1");
        for (auto d : dims_)
            if (d == 0)
                throw DimensionError("ComplexTensor: zero extent in shape " + shape_string(dims_));
    }

    Shape dims_;
    Vector data_;
};

namespace detail {

// Splits the shape around `mode`: number of entries before it and after it.
struct ModeSplit {
    std::size_t before = 1;
    std::size_t extent = 1;
    std::size_t after = 1;
};

inline ModeSplit split_at(const Shape& dims, std::size_t mode)
{
    if (mode >= dims.size())
        throw DimensionError("mode " + std::to_string(mode) + " out of range for order-" +
                             std::to_string(dims.size()) + " tensor");
    ModeSplit s;
    for (std::size_t m = 0; m < mode; ++m)
        s.before *= dims[m];
    s.extent = dims[mode];
    for (std::size_t m = mode + 1; m < dims.size(); ++m)
        s.after *= dims[m];
    return s;
}

} // namespace detail

/// Mode-`mode` unfolding (0-based). Columns enumerate the remaining modes in
/// ascending order with the lowest remaining mode fastest.
inline Matrix unfold(const ComplexTensor& x, std::size_t mode)
{
    const auto s = detail::split_at(x.dims(), mode);
    Matrix out(static_cast<Index>(s.extent), static_cast<Index>(s.before * s.after));
    const Vector& d = x.data();
    for (std::size_t a = 0; a < s.after; ++a)
        for (std::size_t i = 0; i < s.extent; ++i)
            for (std::size_t b = 0; b < s.before; ++b)
                out(static_cast<Index>(i), static_cast<Index>(b + s.before * a)) =
                    d(static_cast<Index>(b + s.before * (i + s.extent * a)));
    return out;
}

inline ComplexTensor fold(const Matrix& m, std::size_t mode, const Shape& dims)
{
    const auto s = detail::split_at(dims, mode);
    if (m.rows() != static_cast<Index>(s.extent) || m.cols() != static_cast<Index>(s.before * s.after))
        throw DimensionError("fold: matrix shape does not match tensor shape " + shape_string(dims));
    ComplexTensor out(dims);
    Vector& d = out.data();
    for (std::size_t a = 0; a < s.after; ++a)
        for (std::size_t i = 0; i < s.extent; ++i)
            for (std::size_t b = 0; b < s.before; ++b)
                d(static_cast<Index>(b + s.before * (i + s.extent * a))) =
                    m(static_cast<Index>(i), static_cast<Index>(b + s.before * a));
    return out;
}

/// X x_mode A, i.e. unfold(result, mode) == A * unfold(X, mode).
inline ComplexTensor n_mode_product(const ComplexTensor& x, const Matrix& a, std::size_t mode)
{
    const auto s = detail::split_at(x.dims(), mode);
    if (a.cols() != static_cast<Index>(s.extent))
        throw DimensionError("n_mode_product: matrix has " + std::to_string(a.cols()) + " columns, mode " +
                             std::to_string(mode) + " has extent " + std::to_string(s.extent));
    Shape dims = x.dims();
    dims[mode] = static_cast<std::size_t>(a.rows());
    return fold(flops::product(a, unfold(x, mode)), mode, dims);
}

inline ComplexTensor reshape(const ComplexTensor& x, Shape dims)
{
    if (element_count(dims) != static_cast<std::size_t>(x.size()))
        throw DimensionError("reshape: cannot view " + shape_string(x.dims()) + " as " + shape_string(dims));
    return ComplexTensor(std::move(dims), x.data());
}

/// Reads a column-major vector as a tensor of the given shape.
inline ComplexTensor tensorize(const Vector& v, Shape dims)
{
    if (element_count(dims) != static_cast<std::size_t>(v.size()))
        throw DimensionError("tensorize: " + std::to_string(v.size()) + " entries cannot fill " + shape_string(dims));
    return ComplexTensor(std::move(dims), v);
}

inline Vector vec(const ComplexTensor& x) { return x.data(); }

/// scale * (v0 o v1 o ... o vN-1). Its vectorisation is scale * (vN-1 kron ... kron v0).
inline ComplexTensor outer(std::span<const Vector> factors, cplx scale = 1.0)
{
    if (factors.empty())
        throw DimensionError("outer: need at least one factor");
    Shape dims;
    Vector acc = Vector::Constant(1, scale);
    for (const auto& f : factors) {
        if (f.size() == 0)
            throw DimensionError("outer: empty factor");
        dims.push_back(static_cast<std::size_t>(f.size()));
        flops::add_macs(static_cast<std::uint64_t>(f.size() * acc.size()));
        acc = kron(f, acc);
    }
    return ComplexTensor(std::move(dims), std::move(acc));
}

/// Identity tensor of given order with all extents `r` (ones on the superdiagonal).
inline ComplexTensor identity_tensor(std::size_t order, std::size_t r)
{
    ComplexTensor out(Shape(order, r));
    std::size_t stride = 0, p = 1;
    for (std::size_t m = 0; m < order; ++m, p *= r)
        stride += p;
    for (std::size_t i = 0; i < r; ++i)
        out.data()(static_cast<Index>(i * stride)) = 1.0;
    return out;
}

} // namespace hdr

#endif // HDR_TENSOR_HPP
