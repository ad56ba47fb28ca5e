#include "braidloom/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace braidloom {

void Laurent::trim() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        low_ = 0;
        return;
    }
    std::size_t tail = coeffs_.size();
    while (tail > lead && coeffs_[tail - 1] == 0) --tail;
    if (lead > 0 || tail < coeffs_.size()) {
        coeffs_ = std::vector<std::int64_t>(coeffs_.begin() + static_cast<long>(lead),
                                            coeffs_.begin() + static_cast<long>(tail));
        low_ += static_cast<int>(lead);
    }
}

Laurent Laurent::operator+(const Laurent& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    int low = std::min(low_, o.low_);
    int high = std::max(highest_exponent(), o.highest_exponent());
    Laurent out;
    out.low_ = low;
    out.coeffs_.assign(static_cast<std::size_t>(high - low + 1), 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        out.coeffs_[static_cast<std::size_t>(low_ - low) + i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        out.coeffs_[static_cast<std::size_t>(o.low_ - low) + i] += o.coeffs_[i];
    out.trim();
    return out;
}

Laurent Laurent::operator-(const Laurent& o) const {
    Laurent neg = o;
    for (auto& c : neg.coeffs_) c = -c;
    return *this + neg;
}

Laurent Laurent::operator*(const Laurent& o) const {
    if (is_zero() || o.is_zero()) return Laurent();
    Laurent out;
    out.low_ = low_ + o.low_;
    out.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            out.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    out.trim();
    return out;
}

Laurent Laurent::pow(int k) const {
    Laurent result = Laurent::one();
    Laurent base = *this;
    if (k < 0) {
        // Only monomials have Laurent inverses; that is all we ever need.
        base = base.invert_variable();
        // invert_variable of a monomial c*A^e is c*A^{-e}; for +/-1 coefficients
        // this is the true inverse up to sign handled below.
        k = -k;
        // sign of odd-coefficient monomials: (c)^{-1} == c for c = +/-1
    }
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

Laurent Laurent::invert_variable() const {
    Laurent out;
    if (is_zero()) return out;
    out.coeffs_.assign(coeffs_.rbegin(), coeffs_.rend());
    out.low_ = -highest_exponent();
    return out;
}

std::string Laurent::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream ss;
    bool first = true;
    for (int e = highest_exponent(); e >= low_; --e) {
        std::int64_t c = coeff(e);
        if (c == 0) continue;
        if (!first) ss << (c > 0 ? " + " : " - ");
        else if (c < 0) ss << "-";
        std::int64_t a = c > 0 ? c : -c;
        if (a != 1 || e == 0) ss << a;
        if (e != 0) {
            ss << "A";
            if (e != 1) ss << "^" << e;
        }
        first = false;
    }
    return ss.str();
}

}  // namespace braidloom
