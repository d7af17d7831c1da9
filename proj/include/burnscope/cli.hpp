// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_CLI_HPP
#define BURNSCOPE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace burnscope::cli {

inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_MISMATCH = 1;
inline constexpr int EXIT_USAGE = 2;
inline constexpr int EXIT_DATA = 3;

/** args excludes the program name. Errors go to err as one JSON object. */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace burnscope::cli

#endif // BURNSCOPE_CLI_HPP
