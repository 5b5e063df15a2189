from .helpers import format_dims, parse_int_list, parse_name_list

__all__ = ["format_dims", "parse_int_list", "parse_name_list"]
