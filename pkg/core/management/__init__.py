# Management commands

