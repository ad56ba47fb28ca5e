#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace braidloom {

// Laurent polynomial with integer coefficients in one variable A.
// Stored as a dense coefficient block starting at the lowest exponent.
class Laurent {
public:
    Laurent() = default;

    static Laurent zero() { return Laurent(); }

    static Laurent term(std::int64_t coeff, int exponent) {
        Laurent p;
        if (coeff != 0) {
            p.low_ = exponent;
            p.coeffs_ = {coeff};
        }
        return p;
    }

    static Laurent one() { return term(1, 0); }

    bool is_zero() const { return coeffs_.empty(); }

    int lowest_exponent() const { return low_; }
    int highest_exponent() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

    std::int64_t coeff(int exponent) const {
        int idx = exponent - low_;
        if (idx < 0 || idx >= static_cast<int>(coeffs_.size())) return 0;
        return coeffs_[static_cast<std::size_t>(idx)];
    }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    bool operator==(const Laurent& o) const { return low_ == o.low_ && coeffs_ == o.coeffs_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    Laurent pow(int k) const;

    // Mirror image: A -> A^{-1}.
    Laurent invert_variable() const;

    std::string to_string() const;

private:
    void trim();

    int low_ = 0;
    std::vector<std::int64_t> coeffs_;
};

}  // namespace braidloom
