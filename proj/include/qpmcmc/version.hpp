#pragma once

#define QPMCMC_SIM_VERSION "0.1.0"
