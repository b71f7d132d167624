_version_str = '0.1.0'
