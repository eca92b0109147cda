#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "bvpkit/errors.hpp"

namespace bvpkit::nn {

/// Dense row-major tensor of doubles. Shape is dynamic; data is
/// contiguous and owned.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(element_count(shape), 0.0);
    }

    static std::size_t element_count(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t d : s) n *= d;
        return n;
    }

    std::size_t size() const { return data.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }
    std::size_t rank() const { return shape.size(); }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    std::string shape_str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(shape[i]);
        }
        return s + ")";
    }
};

inline void require_shape(const Tensor& t, const std::vector<std::size_t>& expected,
                          const char* who) {
    if (t.shape != expected) {
        Tensor e(expected);
        throw ShapeError(std::string(who) + ": expected shape " + e.shape_str() + ", got " +
                         t.shape_str());
    }
}

}  // namespace bvpkit::nn
