#pragma once

#define RELSTANCE_VERSION_MAJOR 0
#define RELSTANCE_VERSION_MINOR 1
#define RELSTANCE_VERSION_PATCH 0
#define RELSTANCE_VERSION "0.1.0"
