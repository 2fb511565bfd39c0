#pragma once

#include <memory>
#include <variant>

namespace v2vlos {

/// a*d^2 + b*d + c
struct Poly2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    friend bool operator==(const Poly2&, const Poly2&) = default;
};

/// a * exp(-b*d)
struct ExpDecay {
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const ExpDecay&, const ExpDecay&) = default;
};

/// (1 / (s*d)) * exp(-(ln d - mu)^2 / k), a scaled log-normal bell. Only
/// defined for d > 0.
struct LogBell {
    double s = 1.0;
    double mu = 0.0;
    double k = 1.0;

    friend bool operator==(const LogBell&, const LogBell&) = default;
};

/// offset - inner(d)
struct OffsetMinusLogBell {
    double offset = 1.0;
    LogBell inner;

    friend bool operator==(const OffsetMinusLogBell&, const OffsetMinusLogBell&) = default;
};

class CurveSpec;

/// `low` for d < threshold, `high` for d >= threshold.
struct Piecewise {
    double threshold = 0.0;
    std::shared_ptr<const CurveSpec> low;
    std::shared_ptr<const CurveSpec> high;

    friend bool operator==(const Piecewise& x, const Piecewise& y);
};

/// Immutable distance -> probability curve. Construction validates the
/// parameters; evaluation through eval_curve() clamps to [0, 1].
class CurveSpec {
public:
    using Node = std::variant<Poly2, ExpDecay, LogBell, OffsetMinusLogBell, Piecewise>;

    CurveSpec(Poly2 p);
    CurveSpec(ExpDecay e);
    CurveSpec(LogBell l);
    CurveSpec(OffsetMinusLogBell o);

    static CurveSpec piecewise(double threshold, CurveSpec low, CurveSpec high);

    const Node& node() const noexcept { return node_; }

    template <class T>
    const T* get_if() const noexcept
    {
        return std::get_if<T>(&node_);
    }

    /// True if any reachable node is a log-normal term (requires d > 0).
    bool has_log_term() const noexcept;

    /// Unclamped family value. No domain checks.
    double raw(double d) const noexcept;

    friend bool operator==(const CurveSpec& x, const CurveSpec& y) { return x.node_ == y.node_; }

private:
    explicit CurveSpec(Node node) : node_(std::move(node)) {}

    Node node_;
};

double log_bell(const LogBell& l, double d) noexcept;

/// Family value clamped to [0, 1]. Throws DomainError for non-finite d, and
/// for d <= 0 when the curve contains a log-normal term.
double eval_curve(const CurveSpec& spec, double d);

} // namespace v2vlos
