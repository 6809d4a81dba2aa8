#pragma once

// Named pass/fail entries shared by the verification routines.

#include <string>
#include <vector>

namespace qheis {

struct CheckEntry {
    std::string name;
    bool passed = false;
    double value = 0.0;  // measured residual or magnitude
    double tol = 0.0;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    bool pass() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return !entries.empty();
    }
    const CheckEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
    /// Entry passes when value <= tol.
    CheckEntry& bound(std::string name, double value, double tol, std::string detail = {}) {
        entries.push_back({std::move(name), value <= tol, value, tol, std::move(detail)});
        return entries.back();
    }
    CheckEntry& flag(std::string name, bool ok, std::string detail = {}) {
        entries.push_back({std::move(name), ok, 0.0, 0.0, std::move(detail)});
        return entries.back();
    }
};

}  // namespace qheis
