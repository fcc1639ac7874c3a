// Verification reports: named checks with pass/fail flags and witnesses.
#pragma once

#include <string>
#include <vector>

namespace starlat {

struct CheckItem {
    std::string name;
    bool ok = true;
    std::string witness;  // empty on pass
};

struct Report {
    std::string subject;
    std::vector<CheckItem> items;

    bool ok() const {
        for (const auto& i : items)
            if (!i.ok) return false;
        return true;
    }
    void check(const std::string& name, bool pass, const std::string& witness = "") {
        items.push_back({name, pass, pass ? "" : witness});
    }
    void merge(const Report& other) {
        for (const auto& i : other.items) items.push_back(i);
    }
    std::string first_failure() const {
        for (const auto& i : items)
            if (!i.ok) return i.name + (i.witness.empty() ? "" : ": " + i.witness);
        return "";
    }
    std::string to_text() const {
        std::string s;
        for (const auto& i : items) {
            s += (i.ok ? "  ok   " : "  FAIL ") + i.name;
            if (!i.witness.empty()) s += "  [" + i.witness + "]";
            s += "\n";
        }
        return s;
    }
};

}  // namespace starlat
