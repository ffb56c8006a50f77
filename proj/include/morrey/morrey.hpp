#pragma once

#include "morrey/archive.hpp"
#include "morrey/chain.hpp"
#include "morrey/config.hpp"
#include "morrey/contour.hpp"
#include "morrey/descent.hpp"
#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/experiment.hpp"
#include "morrey/field.hpp"
#include "morrey/grid.hpp"
#include "morrey/holder.hpp"
#include "morrey/oned.hpp"
#include "morrey/properties.hpp"
#include "morrey/quasiconcavity.hpp"
#include "morrey/report.hpp"
#include "morrey/singular.hpp"
#include "morrey/stability.hpp"
#include "morrey/text.hpp"
