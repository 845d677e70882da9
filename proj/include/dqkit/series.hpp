#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dqkit/scalar.hpp"

namespace dq {

/// Truncated bivariate power series H(a,b) = sum c_ij a^i b^j over i+j <= P.
/// Absent coefficients are zero.
class PowerSeries2D {
public:
    explicit PowerSeries2D(int order) : order_(order) {
        if (order < 0) throw DomainError("series truncation order must be nonnegative");
    }

    int order() const { return order_; }

    void set(int i, int j, Scalar value) {
        if (i < 0 || j < 0) throw DomainError("series indices must be nonnegative");
        if (i + j > order_)
            throw DomainError("coefficient (" + std::to_string(i) + "," + std::to_string(j) +
                              ") exceeds truncation order " + std::to_string(order_));
        coeffs_[{i, j}] = std::move(value);
    }

    const Scalar* find(int i, int j) const {
        auto it = coeffs_.find({i, j});
        return it == coeffs_.end() ? nullptr : &it->second;
    }

    Scalar coeff(int i, int j, Mode mode) const {
        const Scalar* c = find(i, j);
        return c ? *c : Scalar::zero(mode);
    }

    const std::map<std::pair<int, int>, Scalar>& coefficients() const { return coeffs_; }

    /// Direct evaluation of the truncated sum, in the scalars' mode.
    Scalar eval(const Scalar& a, const Scalar& b) const {
        const Mode m = a.mode();
        std::vector<Scalar> pa(order_ + 1, Scalar::one(m)), pb(order_ + 1, Scalar::one(m));
        for (int k = 1; k <= order_; ++k) {
            pa[k] = pa[k - 1] * a;
            pb[k] = pb[k - 1] * b;
        }
        Scalar sum = Scalar::zero(m);
        for (const auto& [ij, c] : coeffs_)
            sum = sum + c * pa[ij.first] * pb[ij.second];
        return sum;
    }

    /// Reads `i j value` records, one per line; blank lines are ignored and
    /// missing records mean zero. The truncation order is the maximal i+j seen
    /// (at least `min_order`).
    static PowerSeries2D load(std::istream& in, Mode mode, int min_order = 0) {
        struct Record {
            int i, j;
            Scalar value;
        };
        std::vector<Record> records;
        int order = min_order;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            long i, j;
            std::string value_text;
            if (!(ls >> i)) continue; // blank line
            if (!(ls >> j >> value_text))
                throw DomainError("series file line " + std::to_string(line_no) +
                                  ": expected 'i j value'");
            std::string extra;
            if (ls >> extra)
                throw DomainError("series file line " + std::to_string(line_no) +
                                  ": trailing content '" + extra + "'");
            if (i < 0 || j < 0)
                throw DomainError("series file line " + std::to_string(line_no) +
                                  ": negative index");
            records.push_back({static_cast<int>(i), static_cast<int>(j),
                               Scalar::parse(value_text, mode)});
            order = std::max(order, static_cast<int>(i + j));
        }
        PowerSeries2D series(order);
        for (auto& rec : records) {
            if (series.find(rec.i, rec.j))
                throw DomainError("duplicate series coefficient (" + std::to_string(rec.i) +
                                  "," + std::to_string(rec.j) + ")");
            series.set(rec.i, rec.j, std::move(rec.value));
        }
        return series;
    }

    static PowerSeries2D load_file(const std::string& path, Mode mode, int min_order = 0) {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot open series file '" + path + "'");
        return load(in, mode, min_order);
    }

private:
    int order_;
    std::map<std::pair<int, int>, Scalar> coeffs_;
};

} // namespace dq
