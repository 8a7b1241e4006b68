#pragma once

#include "chp/action.hpp"
#include "chp/causal.hpp"
#include "chp/compose.hpp"
#include "chp/errors.hpp"
#include "chp/net.hpp"
#include "chp/pcp.hpp"
#include "chp/pomset.hpp"
#include "chp/props.hpp"
#include "chp/testing.hpp"
#include "chp/textio.hpp"
