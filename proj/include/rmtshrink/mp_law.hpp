#ifndef RMTSHRINK_MP_LAW_HPP
#define RMTSHRINK_MP_LAW_HPP

namespace rmtshrink {

/// Marchenko-Pastur law of the singular values of n^{-1/2} W, W an m x n
/// matrix of i.i.d. standard normals, in the limit m/n -> c.
///
/// Only the min(m, n) singular values are described, so the law has unit
/// mass on [|1 - sqrt(c)|, 1 + sqrt(c)] for every c > 0.
class MpLaw {
public:
    struct Support {
        double lower;
        double upper;
    };

    explicit MpLaw(double c);

    double aspect_ratio() const { return c_; }
    /// a = (1 - sqrt(c))^2, the squared lower edge.
    double a() const { return a_; }
    /// b = (1 + sqrt(c))^2, the squared upper edge.
    double b() const { return b_; }

    Support support() const;

    double density(double s) const;
    double cdf(double x) const;
    /// Inverse of cdf on (0, 1), by bisection.
    double quantile(double p) const;

private:
    double c_;
    double sqrt_c_;
    double a_;
    double b_;
};

} // namespace rmtshrink

#endif // RMTSHRINK_MP_LAW_HPP
