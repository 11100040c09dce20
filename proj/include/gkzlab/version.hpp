#pragma once

#define GKZLAB_VERSION "0.1.0"
