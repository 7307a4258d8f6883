#pragma once

#include "ilo/linalg.hpp"
#include "ilo/domains.hpp"
#include "ilo/iteration.hpp"
#include "ilo/elliptope.hpp"
#include "ilo/classification.hpp"
#include "ilo/maxcut.hpp"
#include "ilo/io.hpp"
#include "ilo/report.hpp"
