// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_ERROR_HPP
#define BURNSCOPE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace burnscope {

enum class Errc {
    Truncated,
    NonMinimal,
    TrailingBytes,
    SuperfluousWitness,
    MalformedTx,
    BadMagic,
    LengthMismatch,
    MalformedPush,
    BadChecksum,
    BadAlphabet,
    BadAddress,
    BadLabel,
    UnknownTx,
    DateNotCovered,
    BadPrice,
    BadConfig,
    BadSnapshot,
    InfeasibleScenario,
    Overflow,
    Io,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), m_code(code) {}

    Errc code() const noexcept { return m_code; }

private:
    Errc m_code;
};

[[noreturn]] inline void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace burnscope

#endif // BURNSCOPE_ERROR_HPP
