#pragma once

#include <string>

namespace metarank {

/// A query option rewritten as an assertable statement.
struct Claim {
    std::string claim_id;
    std::string query_id;
    std::string text;
};

}  // namespace metarank
