#pragma once

#define ODDLAB_VERSION "0.1.0"
