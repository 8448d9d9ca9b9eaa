#pragma once

#include <array>
#include <cmath>

namespace splitgeo {

// Validity region of a potential on its 2D block.  Built-ins carry the
// region on which their closed forms are defined; user fields may attach
// a rectangle of their own.
class Domain {
  public:
    enum class Kind { All, Rectangle, OpenDisk, NonzeroAxis };

    static Domain all() { return Domain{Kind::All, {}}; }

    static Domain rectangle(double u0, double u1, double v0, double v1) {
        return Domain{Kind::Rectangle, {u0, u1, v0, v1}};
    }

    // Open disk of given radius centred at the origin.
    static Domain open_disk(double radius) { return Domain{Kind::OpenDisk, {radius, 0, 0, 0}}; }

    // Complement of the line {coordinate axis == 0}; axis 0 is the first
    // block coordinate, axis 1 the second.
    static Domain nonzero_axis(int axis) {
        return Domain{Kind::NonzeroAxis, {static_cast<double>(axis), 0, 0, 0}};
    }

    bool contains(double u, double v) const {
        switch (kind_) {
            case Kind::All:
                return true;
            case Kind::Rectangle:
                return u >= p_[0] && u <= p_[1] && v >= p_[2] && v <= p_[3];
            case Kind::OpenDisk:
                return u * u + v * v < p_[0] * p_[0];
            case Kind::NonzeroAxis:
                return (p_[0] < 0.5 ? u : v) != 0.0;
        }
        return false;
    }

    // Block-local index (0 or 1) of the coordinate most responsible for a
    // violation at (u, v); used when reporting coordinate singularities.
    int violating_axis(double u, double v) const {
        switch (kind_) {
            case Kind::All:
                return 0;
            case Kind::Rectangle: {
                const double du = std::max(p_[0] - u, u - p_[1]);
                const double dv = std::max(p_[2] - v, v - p_[3]);
                return dv > du ? 1 : 0;
            }
            case Kind::OpenDisk:
                return std::abs(v) > std::abs(u) ? 1 : 0;
            case Kind::NonzeroAxis:
                return p_[0] < 0.5 ? 0 : 1;
        }
        return 0;
    }

    Kind kind() const { return kind_; }

  private:
    Domain(Kind k, std::array<double, 4> p) : kind_(k), p_(p) {}

    Kind kind_;
    std::array<double, 4> p_{};
};

} // namespace splitgeo
