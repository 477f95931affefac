// implementation unit for the json_io module
