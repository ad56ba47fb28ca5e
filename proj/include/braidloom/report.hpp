#pragma once

#include <map>
#include <string>
#include <vector>

namespace braidloom {

enum class Severity { Info, Warning, Error };

struct Finding {
    std::string location;
    Severity severity = Severity::Info;
    std::string message;
};

// Shared result type of all validators. pass <=> no Error-severity findings.
struct ValidationReport {
    bool pass = true;
    std::vector<Finding> findings;
    std::map<std::string, long long> metrics;

    void add(Severity sev, const std::string& location, const std::string& message) {
        findings.push_back({location, sev, message});
        if (sev == Severity::Error) pass = false;
    }

    std::string to_string() const;
};

}  // namespace braidloom
