#pragma once

#include "ftcs/core.hpp"
#include "ftcs/presentation.hpp"
#include "ftcs/generation.hpp"
#include "ftcs/oracle.hpp"
#include "ftcs/analysis.hpp"
#include "ftcs/io.hpp"
