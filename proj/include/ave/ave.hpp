#pragma once

#include "ave/linalg.hpp"
#include "ave/lp.hpp"
#include "ave/random.hpp"
#include "ave/core.hpp"
#include "ave/classify.hpp"
#include "ave/reform.hpp"
#include "ave/solvers.hpp"
#include "ave/oracle.hpp"
#include "ave/report.hpp"
#include "ave/io.hpp"
