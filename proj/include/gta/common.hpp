/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gta {

/// Reserved prefix for all generated names (rollup states, booleanization
/// labels, entailment helper concepts). User inputs using it are rejected
/// at parse time.
inline constexpr const char* kReservedPrefix = "__";

inline bool is_reserved_name(const std::string& s) {
    return s.size() >= 2 && s[0] == '_' && s[1] == '_';
}

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& file, int line, int col, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line, col;
};

struct BudgetExceededError : Error {
    explicit BudgetExceededError(const std::string& msg) : Error(msg) {}
};

struct CapExceededError : Error {
    explicit CapExceededError(const std::string& msg) : Error(msg) {}
};

struct IncoherentTBoxError : Error {
    explicit IncoherentTBoxError(const std::string& msg) : Error(msg) {}
};

/// Shared step counter for the decision engines. A single budget is threaded
/// through a whole pipeline run; exhaustion raises BudgetExceededError which
/// callers surface as a distinct verdict, not a failure.
class Budget {
public:
    explicit Budget(std::int64_t limit = 10'000'000) : limit_(limit) {}

    void tick(std::int64_t n = 1) {
        used_ += n;
        if (used_ > limit_)
            throw BudgetExceededError("step budget exceeded (" + std::to_string(limit_) + ")");
    }
    std::int64_t used() const { return used_; }
    std::int64_t limit() const { return limit_; }

private:
    std::int64_t limit_;
    std::int64_t used_ = 0;
};

}  // namespace gta
