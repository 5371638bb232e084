#pragma once

// Strongly typed daily-flow quantities. Each unit is a distinct type so that
// mixing e.g. BTC/day with USD/day fails to compile.

#include <compare>

namespace btcecon {

template <class Tag>
class Quantity {
public:
    constexpr Quantity() = default;
    constexpr explicit Quantity(double v) : v_(v) {}

    [[nodiscard]] constexpr double value() const { return v_; }

    constexpr auto operator<=>(const Quantity&) const = default;

    constexpr Quantity& operator+=(Quantity o) { v_ += o.v_; return *this; }
    constexpr Quantity& operator-=(Quantity o) { v_ -= o.v_; return *this; }

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.v_ + b.v_); }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.v_ - b.v_); }
    friend constexpr Quantity operator-(Quantity a) { return Quantity(-a.v_); }
    friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.v_ * s); }
    friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(s * a.v_); }
    friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.v_ / s); }
    // Same-unit ratio is dimensionless.
    friend constexpr double operator/(Quantity a, Quantity b) { return a.v_ / b.v_; }

private:
    double v_ = 0.0;
};

struct UsdPerDayTag {};
struct BtcPerDayTag {};
struct UsdPerBtcTag {};
struct UsdPerKwhTag {};
struct KilowattTag {};
struct ThPerSTag {};

using UsdPerDay = Quantity<UsdPerDayTag>;   ///< daily USD flow (fees, revenue, profit)
using BtcPerDay = Quantity<BtcPerDayTag>;   ///< daily BTC flow (block reward)
using UsdPerBtc = Quantity<UsdPerBtcTag>;   ///< exchange rate X
using UsdPerKwh = Quantity<UsdPerKwhTag>;   ///< electricity price p
using Kilowatts = Quantity<KilowattTag>;    ///< rig power draw
using ThPerS = Quantity<ThPerSTag>;         ///< hashrate in terahashes per second

inline constexpr double kHoursPerDay = 24.0;

}  // namespace btcecon
