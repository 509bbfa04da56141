#pragma once

#include "lsw/distribution.hpp"
#include "lsw/ensemble.hpp"
#include "lsw/errors.hpp"
#include "lsw/io.hpp"
#include "lsw/numerics.hpp"
#include "lsw/recrystallization.hpp"
#include "lsw/regime.hpp"
#include "lsw/return_map.hpp"

#include <string_view>

namespace lsw
{

inline constexpr std::string_view version = "1.0.0";

} // namespace lsw
