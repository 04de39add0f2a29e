#pragma once

// Umbrella include for the whole toolkit.

#include "ngdbf/archive.hpp"
#include "ngdbf/channel.hpp"
#include "ngdbf/config.hpp"
#include "ngdbf/decoder.hpp"
#include "ngdbf/montecarlo.hpp"
#include "ngdbf/refdec.hpp"
#include "ngdbf/stats.hpp"
#include "ngdbf/tanner.hpp"
#include "ngdbf/trapset.hpp"
#include "ngdbf/version.hpp"
