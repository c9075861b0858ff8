#pragma once

#include "ternalg/connections.hpp"
#include "ternalg/constructors.hpp"
#include "ternalg/fields.hpp"
#include "ternalg/presets.hpp"
#include "ternalg/tensor.hpp"
#include "ternalg/tern_core.hpp"
#include "ternalg/transport.hpp"
