#pragma once

#include "asymptotics.hpp"
#include "config.hpp"
#include "ext_real.hpp"
#include "measure.hpp"
#include "multprod.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "report.hpp"
#include "spaces.hpp"
#include "theorems.hpp"
#include "young.hpp"
