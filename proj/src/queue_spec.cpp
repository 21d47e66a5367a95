#include "fjq/queue_spec.hpp"

#include "fjq/errors.hpp"

namespace fjq {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::basic: return "basic";
        case Variant::non_purging: return "non-purging";
        case Variant::purging: return "purging";
        case Variant::split_merge: return "split-merge";
    }
    return "?";
}

std::string_view to_string(ServiceKind s) {
    switch (s) {
        case ServiceKind::exponential: return "exponential";
        case ServiceKind::deterministic: return "deterministic";
        case ServiceKind::weibull: return "weibull";
    }
    return "?";
}

Variant parse_variant(std::string_view text) {
    for (auto v : {Variant::basic, Variant::non_purging, Variant::purging, Variant::split_merge}) {
        if (text == to_string(v)) return v;
    }
    throw DomainError("unknown queue variant '" + std::string(text) +
                      "' (expected basic, non-purging, purging or split-merge)");
}

ServiceKind parse_service_kind(std::string_view text) {
    for (auto s : {ServiceKind::exponential, ServiceKind::deterministic, ServiceKind::weibull}) {
        if (text == to_string(s)) return s;
    }
    throw DomainError("unknown service distribution '" + std::string(text) + "'");
}

void QueueSpec::validate() const {
    if (n < 1 || k < 1 || k > n) {
        throw DomainError("require 1 <= k <= n (got n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    if (mu <= 0) throw DomainError("service rate mu must be positive (got " + fjq::to_string(mu) + ")");
    if (lambda < 0) throw DomainError("arrival rate lambda must be >= 0 (got " + fjq::to_string(lambda) + ")");
}

void require_stable(const QueueSpec& spec) {
    spec.validate();
    if (spec.rho() >= 1) {
        throw InstabilityError("unstable load: rho = lambda/mu = " + fjq::to_string(spec.rho()) +
                               "; analytic formulas require 0 <= rho < 1");
    }
}

}  // namespace fjq
